// Copyright 2026 The nuadv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// nuadv command-line tool. Every subcommand writes its outputs atomically
// and records a run manifest that `nuadv replay` re-executes.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nuadv/adv_train.h"
#include "nuadv/attack.h"
#include "nuadv/certlp.h"
#include "nuadv/consistency.h"
#include "nuadv/data.h"
#include "nuadv/error.h"
#include "nuadv/importance.h"
#include "nuadv/io.h"
#include "nuadv/net.h"
#include "nuadv/omega.h"
#include "nuadv/smooth.h"
#include "nuadv/text.h"

#ifndef NUADV_VERSION
#define NUADV_VERSION "0.0.0"
#endif

namespace nuadv {
namespace {

// Options that steer the run but are not part of its recorded config.
const std::set<std::string> kUnrecorded = {"help", "config", "manifest"};

std::vector<std::string> split_list(const std::string& s) {
  if (s.empty()) return {};
  return split_csv_line(s);
}

std::vector<std::size_t> parse_dims(const std::string& s) {
  std::vector<std::size_t> dims;
  for (const std::string& cell : split_list(s)) {
    double v = 0;
    if (!parse_double(cell, &v) || v < 1 || v != std::floor(v)) {
      throw std::invalid_argument("bad layer width '" + cell + "'");
    }
    dims.push_back(static_cast<std::size_t>(v));
  }
  return dims;
}

// Loads raw rows and brings them into the model's standardized space.
Dataset load_for_model(const std::string& path, const std::string& label,
                       const ModelFile& model) {
  Dataset d = load_csv(path, label);
  if (d.feature_names != model.feature_names) {
    throw SchemaError("'" + path + "' columns do not match the model features");
  }
  return model.standardization ? model.standardization->apply(d) : d;
}

// identity | pearson | shapley[:permutations] | md | md-target |
// mask:<name,...> | import:<file>
OmegaTransform build_omega(const std::string& spec, const Dataset& reference,
                           const std::function<const MlpModel&()>& model,
                           std::uint64_t seed) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg =
      colon == std::string::npos ? "" : spec.substr(colon + 1);
  std::optional<OmegaTransform> omega;
  if (head == "identity") {
    omega = OmegaTransform::identity(reference.dim());
  } else if (head == "pearson") {
    omega = omega_from_importance(pearson_importance(reference).values);
  } else if (head == "shapley") {
    ShapleyOptions opt;
    opt.seed = seed;
    if (!arg.empty()) {
      double k = 0;
      if (!parse_double(arg, &k) || k < 1 || k != std::floor(k)) {
        throw std::invalid_argument("bad shapley permutation count '" + arg +
                                    "'");
      }
      opt.permutations = static_cast<int>(k);
    }
    omega = omega_from_importance(
        shapley_importance(model(), reference, opt).values);
  } else if (head == "md") {
    omega = omega_mahalanobis(covariance(reference, ClassFilter::kAll));
  } else if (head == "md-target") {
    omega = omega_mahalanobis(covariance(reference, ClassFilter::kNegativeOnly));
  } else if (head == "mask") {
    omega = omega_mask(reference.feature_names, split_list(arg));
  } else if (head == "import") {
    omega = load_omega(arg);
    if (omega->dim() != reference.dim()) {
      throw DimensionMismatch("imported omega", reference.dim(), omega->dim());
    }
  } else {
    throw std::invalid_argument("unknown omega spec '" + spec + "'");
  }
  if (head != "import") omega->set_label(head);
  return *std::move(omega);
}

ConstraintSet constraint_for(const OmegaTransform& omega,
                             double combo_epsilon) {
  if (combo_epsilon > 0.0) return ConstraintSet::combo(omega, combo_epsilon);
  if (omega.kind() == OmegaTransform::Kind::kIdentity) {
    return ConstraintSet::uniform();
  }
  return ConstraintSet::nonuniform(omega);
}

// Noise covariance: identity | md | md-target | pearson | shapley[:k] |
// file:<csv>. Importance sources give sigma^2 Omega^-2.
Matrix build_noise(const std::string& spec, double sigma,
                   const Dataset& reference, const MlpModel& model,
                   std::uint64_t seed) {
  const auto d = static_cast<Eigen::Index>(reference.dim());
  if (spec == "identity") return sigma * sigma * Matrix::Identity(d, d);
  if (spec == "md") return sigma * sigma * covariance(reference, ClassFilter::kAll);
  if (spec == "md-target") {
    return sigma * sigma * covariance(reference, ClassFilter::kNegativeOnly);
  }
  if (spec.rfind("file:", 0) == 0) {
    const std::string path = spec.substr(5);
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<double> row;
      for (const std::string& cell : split_csv_line(line)) {
        double v = 0;
        if (!parse_double(cell, &v)) {
          throw ParseError("'" + path + "': bad number '" + cell + "'");
        }
        row.push_back(v);
      }
      rows.push_back(row);
    }
    if (static_cast<Eigen::Index>(rows.size()) != d) {
      throw DimensionMismatch("covariance file rows", d, rows.size());
    }
    Matrix m(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
      if (static_cast<Eigen::Index>(rows[r].size()) != d) {
        throw DimensionMismatch("covariance file columns", d, rows[r].size());
      }
      for (Eigen::Index c = 0; c < d; ++c) m(r, c) = rows[r][c];
    }
    return m;
  }
  if (spec.rfind("pearson", 0) == 0 || spec.rfind("shapley", 0) == 0) {
    const OmegaTransform omega =
        build_omega(spec, reference, [&]() -> const MlpModel& { return model; },
                    seed);
    const Vector w = omega.weights();
    return sigma * sigma * w.cwiseInverse().cwiseAbs2().asDiagonal().toDenseMatrix();
  }
  throw std::invalid_argument("unknown noise spec '" + spec + "'");
}

std::string fmt(double v) { return format_double(v); }

// ---------------------------------------------------------------------------

struct Context {
  std::map<std::string, std::string> inputs;   // path -> role
  std::vector<std::string> outputs;
};

struct PrepareArgs {
  std::string input, label = "label", drop, train_out, test_out;
  double test_fraction = 0.2;
};

void run_prepare(const PrepareArgs& a, std::uint64_t seed, Context& ctx) {
  const Dataset d = load_csv(a.input, a.label, split_list(a.drop));
  const TrainTestSplit s = train_test_split(d, a.test_fraction, seed);
  write_csv(s.train, a.train_out, a.label);
  write_csv(s.test, a.test_out, a.label);
  ctx.inputs[a.input] = "input";
  ctx.outputs = {a.train_out, a.test_out};
  std::cout << "train_rows=" << s.train.size()
            << " test_rows=" << s.test.size()
            << " train_positives=" << s.train.count_label(1)
            << " test_positives=" << s.test.count_label(1) << '\n';
}

struct AttackOptions {
  std::string omega = "identity";
  std::string norm = "2";
  int steps = 10;
  double step_scale = 0.25;
  std::string init = "zero";
  double combo_epsilon = 0.0;
};

AttackConfig attack_config(const AttackOptions& o, std::uint64_t seed) {
  AttackConfig cfg;
  cfg.steps = o.steps;
  cfg.step_scale = o.step_scale;
  cfg.seed = seed;
  if (o.init == "zero") {
    cfg.init = AttackInit::kZero;
  } else if (o.init == "random") {
    cfg.init = AttackInit::kRandom;
  } else {
    throw std::invalid_argument("init must be 'zero' or 'random'");
  }
  return cfg;
}

struct TrainArgs {
  std::string data, label = "label", model_out, log_out;
  std::string hidden = "64,32,16";
  int epochs = 100;
  int batch_size = 32;
  double learning_rate = 0.01;
  double dropout = 0.2;
  double epsilon = 0.0;    // > 0 enables adversarial training
  double match_l2 = 0.0;   // > 0: calibrate epsilon to this mean ||delta||_2
  double fraction = 0.9;
  AttackOptions attack;
};

void run_train(const TrainArgs& a, std::uint64_t seed, Context& ctx) {
  const Dataset raw = load_csv(a.data, a.label);
  auto [data, stats] = standardize(raw);
  std::vector<std::size_t> dims = {data.dim()};
  for (std::size_t h : parse_dims(a.hidden)) dims.push_back(h);
  dims.push_back(2);
  const MlpModel init = make_he_uniform_model(dims, a.dropout, seed);
  TrainConfig base;
  base.epochs = a.epochs;
  base.batch_size = a.batch_size;
  base.learning_rate = a.learning_rate;
  base.seed = seed;
  base.dropout_enabled = a.dropout > 0.0;

  // Standard-trained surrogate, needed for Shapley weights and calibration.
  std::optional<MlpModel> surrogate;
  auto surrogate_model = [&]() -> const MlpModel& {
    if (!surrogate) surrogate = train_clean(init, data, base).model;
    return *surrogate;
  };

  ModelFile out;
  out.feature_names = data.feature_names;
  out.standardization = stats;
  const bool adversarial = a.epsilon > 0.0 || a.match_l2 > 0.0;
  TrainResult result;
  if (!adversarial) {
    result = train_clean(init, data, base);
  } else {
    const OmegaTransform omega =
        build_omega(a.attack.omega, data, surrogate_model, seed);
    AdvTrainConfig cfg;
    cfg.base = base;
    cfg.attack = attack_config(a.attack, seed);
    cfg.positive_fraction = a.fraction;
    cfg.budget = {a.epsilon, parse_norm(a.attack.norm)};
    if (a.match_l2 > 0.0) {
      cfg.budget.epsilon =
          match_budgets(data, {omega}, a.match_l2, cfg.attack,
                        surrogate_model(), cfg.budget.p)
              .front();
    }
    cfg.attack.constraint = constraint_for(omega, a.attack.combo_epsilon);
    result = adversarial_train(init, data, cfg).train;
    out.omega = omega;
    out.train_epsilon = cfg.budget.epsilon;
  }
  out.model = result.model;
  save_model(out, a.model_out);
  ctx.inputs[a.data] = "data";
  ctx.outputs = {a.model_out};
  if (!a.log_out.empty()) {
    AtomicFile log(a.log_out);
    log.stream() << "epoch,loss\n";
    for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) {
      log.stream() << e << ',' << fmt(result.epoch_loss[e]) << '\n';
    }
    log.commit();
    ctx.outputs.push_back(a.log_out);
  }
  std::cout << "train_accuracy=" << fmt(accuracy(out.model, data))
            << " final_loss=" << fmt(result.epoch_loss.back())
            << " omega=" << (out.omega ? out.omega->label() : "none")
            << " epsilon=" << fmt(out.train_epsilon) << '\n';
}

struct AttackArgs {
  std::string model, data, label = "label", reference, out;
  std::string targets = "positive";
  double epsilon = 1.0;
  AttackOptions attack;
};

void run_attack(const AttackArgs& a, std::uint64_t seed, Context& ctx) {
  const ModelFile mf = load_model(a.model);
  const Dataset data = load_for_model(a.data, a.label, mf);
  const Dataset reference =
      a.reference.empty() ? data : load_for_model(a.reference, a.label, mf);
  const OmegaTransform omega = build_omega(
      a.attack.omega, reference, [&]() -> const MlpModel& { return mf.model; },
      seed);
  AttackConfig cfg = attack_config(a.attack, seed);
  cfg.constraint = constraint_for(omega, a.attack.combo_epsilon);
  const PerturbationBudget budget{a.epsilon, parse_norm(a.attack.norm)};
  if (a.targets != "positive" && a.targets != "all") {
    throw std::invalid_argument("targets must be 'positive' or 'all'");
  }

  AtomicFile out(a.out);
  out.stream() << "index,label,clean_pred,adv_pred,loss,l2_norm,constraint_norm";
  for (const std::string& name : data.feature_names) {
    out.stream() << ",delta_" << name;
  }
  out.stream() << '\n';
  std::size_t attacked = 0, defended = 0, flipped = 0;
  double total_l2 = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (a.targets == "positive" && data.labels[i] != 1) continue;
    AttackConfig c = cfg;
    c.seed = seed + i;
    const Vector x = data.row(i);
    const PgdResult r = pgd(mf.model, x, data.labels[i], budget, c);
    const int clean = predict(mf.model, x);
    const int adv = predict(mf.model, x + r.delta);
    ++attacked;
    defended += adv == data.labels[i];
    flipped += clean != adv;
    total_l2 += r.delta.norm();
    out.stream() << i << ',' << data.labels[i] << ',' << clean << ',' << adv
                 << ',' << fmt(r.loss) << ',' << fmt(r.delta.norm()) << ','
                 << fmt(constraint_norm(r.delta, cfg.constraint, budget.p));
    for (Eigen::Index j = 0; j < r.delta.size(); ++j) {
      out.stream() << ',' << fmt(r.delta(j));
    }
    out.stream() << '\n';
  }
  if (attacked == 0) throw NoPositiveSamples();
  out.commit();
  ctx.inputs[a.model] = "model";
  ctx.inputs[a.data] = "data";
  if (!a.reference.empty()) ctx.inputs[a.reference] = "reference";
  ctx.outputs = {a.out};
  std::cout << "attacked=" << attacked << " clean_accuracy="
            << fmt(accuracy(mf.model, data)) << " defense_success_rate="
            << fmt(static_cast<double>(defended) / attacked)
            << " flip_rate=" << fmt(static_cast<double>(flipped) / attacked)
            << " mean_l2=" << fmt(total_l2 / attacked) << '\n';
}

struct CertifyLpArgs {
  std::string model, data, label = "label", reference, out;
  std::string omega = "identity", norm = "2", targets = "positive";
  double epsilon = 0.3;
};

void run_certify_lp(const CertifyLpArgs& a, std::uint64_t seed, Context& ctx) {
  const ModelFile mf = load_model(a.model);
  const Dataset data = load_for_model(a.data, a.label, mf);
  const Dataset reference =
      a.reference.empty() ? data : load_for_model(a.reference, a.label, mf);
  const OmegaTransform omega = build_omega(
      a.omega, reference, [&]() -> const MlpModel& { return mf.model; }, seed);
  const PerturbationBudget budget{a.epsilon, parse_norm(a.norm)};
  if (a.targets != "positive" && a.targets != "all") {
    throw std::invalid_argument("targets must be 'positive' or 'all'");
  }
  AtomicFile out(a.out);
  out.stream() << "index,label,prediction,certified,margin\n";
  std::size_t total = 0, certified = 0;
  double margin_sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (a.targets == "positive" && data.labels[i] != 1) continue;
    const Vector x = data.row(i);
    const CertificationReport r =
        certify(mf.model, x, data.labels[i], budget, omega);
    ++total;
    certified += r.certified;
    margin_sum += r.margin;
    out.stream() << i << ',' << data.labels[i] << ','
                 << predict(mf.model, x) << ',' << (r.certified ? 1 : 0)
                 << ',' << fmt(r.margin) << '\n';
  }
  if (total == 0) throw NoPositiveSamples();
  out.commit();
  ctx.inputs[a.model] = "model";
  ctx.inputs[a.data] = "data";
  if (!a.reference.empty()) ctx.inputs[a.reference] = "reference";
  ctx.outputs = {a.out};
  std::cout << "samples=" << total << " certified_fraction="
            << fmt(static_cast<double>(certified) / total)
            << " mean_margin=" << fmt(margin_sum / total) << '\n';
}

struct CertifySmoothArgs {
  std::string model, data, label = "label", reference, out;
  std::string noise = "identity", targets = "all";
  double sigma = 0.5, alpha = 0.001;
  int n0 = 100, n = 10000;
};

void run_certify_smooth(const CertifySmoothArgs& a, std::uint64_t seed,
                        Context& ctx) {
  const ModelFile mf = load_model(a.model);
  const Dataset data = load_for_model(a.data, a.label, mf);
  const Dataset reference =
      a.reference.empty() ? data : load_for_model(a.reference, a.label, mf);
  SmoothingConfig cfg;
  cfg.covariance = build_noise(a.noise, a.sigma, reference, mf.model, seed);
  cfg.n0 = a.n0;
  cfg.n = a.n;
  cfg.alpha = a.alpha;
  if (a.targets != "positive" && a.targets != "all") {
    throw std::invalid_argument("targets must be 'positive' or 'all'");
  }
  AtomicFile out(a.out);
  out.stream() << "index,label,prediction,count,p_lower,md_radius,certified\n";
  std::size_t total = 0, certified = 0, abstained = 0;
  double radius_sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (a.targets == "positive" && data.labels[i] != 1) continue;
    cfg.seed = seed + i;
    const SmoothingResult r = smoothed_predict(mf.model, data.row(i), cfg);
    const bool ok = r.prediction == data.labels[i];
    ++total;
    certified += ok;
    abstained += r.prediction == kAbstain;
    if (ok) radius_sum += r.radius;
    out.stream() << i << ',' << data.labels[i] << ',' << r.prediction << ','
                 << r.count << ',' << fmt(r.p_lower) << ',' << fmt(r.radius)
                 << ',' << (ok ? 1 : 0) << '\n';
  }
  if (total == 0) throw NoPositiveSamples();
  out.commit();
  ctx.inputs[a.model] = "model";
  ctx.inputs[a.data] = "data";
  if (!a.reference.empty()) ctx.inputs[a.reference] = "reference";
  ctx.outputs = {a.out};
  std::cout << "samples=" << total << " certified_fraction="
            << fmt(static_cast<double>(certified) / total)
            << " abstain_fraction=" << fmt(static_cast<double>(abstained) / total)
            << " mean_certified_md_radius="
            << fmt(certified ? radius_sum / certified : 0.0) << '\n';
}

struct ConsistencyArgs {
  std::string model, data, label = "label", perturbations, out;
  std::string sigma = "md-target";
  double epsilon = 0.0;
  int bins = kMdHistogramBins;
};

// Reads the delta_<feature> columns of an attack CSV.
std::vector<Vector> read_deltas(const std::string& path,
                                const std::vector<std::string>& names) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw EmptyInput("'" + path + "' is empty");
  const auto header = split_csv_line(line);
  std::vector<std::size_t> cols;
  for (const std::string& name : names) {
    auto it = std::find(header.begin(), header.end(), "delta_" + name);
    if (it == header.end()) {
      throw SchemaError("'" + path + "' has no column delta_" + name);
    }
    cols.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  std::vector<Vector> deltas;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw ParseError("'" + path + "': ragged row");
    }
    Vector d(static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (!parse_double(cells[cols[j]], &d(static_cast<Eigen::Index>(j)))) {
        throw ParseError("'" + path + "': bad number '" + cells[cols[j]] + "'");
      }
    }
    deltas.push_back(d);
  }
  return deltas;
}

void run_consistency(const ConsistencyArgs& a, Context& ctx) {
  const ModelFile mf = load_model(a.model);
  const Dataset reference = load_for_model(a.data, a.label, mf);
  ClassFilter filter;
  if (a.sigma == "md-target") {
    filter = ClassFilter::kNegativeOnly;
  } else if (a.sigma == "md") {
    filter = ClassFilter::kAll;
  } else {
    throw std::invalid_argument("sigma must be 'md' or 'md-target'");
  }
  Matrix cov = covariance(reference, filter);
  cov.diagonal().array() += default_ridge(cov);
  const GaussianModel g(cov);
  const auto deltas = read_deltas(a.perturbations, mf.feature_names);
  const MdSquareStats stats = md_square_stats(g, deltas, a.bins);
  write_histogram_csv(stats, a.out);
  ctx.inputs[a.model] = "model";
  ctx.inputs[a.data] = "data";
  ctx.inputs[a.perturbations] = "perturbations";
  ctx.outputs = {a.out};
  std::cout << "perturbations=" << deltas.size()
            << " mean_md_square=" << fmt(stats.mean)
            << " log_normalizer=" << fmt(g.log_normalizer())
            << " mean_log_gamma=" << fmt(stats.mean_log_gamma);
  if (a.epsilon > 0.0) {
    std::size_t inside = 0;
    for (const Vector& d : deltas) inside += consistency_bound_check(g, d, a.epsilon);
    std::cout << " within_epsilon="
              << fmt(static_cast<double>(inside) / deltas.size());
  }
  std::cout << '\n';
}

struct ImportanceArgs {
  std::string data, label = "label", model, method = "pearson", out;
};

void run_importance(const ImportanceArgs& a, std::uint64_t seed,
                    Context& ctx) {
  ImportanceVector imp;
  if (a.method == "pearson") {
    imp = pearson_importance(load_csv(a.data, a.label));
  } else if (a.method.rfind("shapley", 0) == 0) {
    if (a.model.empty()) {
      throw std::invalid_argument("shapley importance needs --model");
    }
    const ModelFile mf = load_model(a.model);
    const Dataset data = load_for_model(a.data, a.label, mf);
    ShapleyOptions opt;
    opt.seed = seed;
    if (a.method.size() > 7) {
      double k = 0;
      if (a.method[7] != ':' || !parse_double(a.method.substr(8), &k) || k < 1 ||
          k != std::floor(k)) {
        throw std::invalid_argument("bad method '" + a.method + "'");
      }
      opt.permutations = static_cast<int>(k);
    }
    imp = shapley_importance(mf.model, data, opt);
    ctx.inputs[a.model] = "model";
  } else {
    throw std::invalid_argument("method must be pearson or shapley[:k]");
  }
  write_importance_csv(imp, a.out);
  ctx.inputs[a.data] = "data";
  ctx.outputs = {a.out};
  std::cout << "features=" << imp.values.size() << '\n';
}

// ---------------------------------------------------------------------------

class ExitError : public std::runtime_error {
 public:
  ExitError(int code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

int run(const std::vector<std::string>& args);

std::map<std::string, std::string> recorded_config(const CLI::App& sub) {
  std::map<std::string, std::string> config;
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (kUnrecorded.count(name)) continue;
    std::string value;
    if (!opt->results().empty()) {
      value = opt->results().back();
    } else {
      value = opt->get_default_str();
    }
    if (!value.empty()) config[name] = value;
  }
  return config;
}

int replay(const std::string& manifest_path) {
  const RunManifest m = load_manifest(manifest_path);
  std::vector<std::string> args = {m.command};
  for (const auto& [key, value] : m.config) {
    args.push_back("--" + key);
    args.push_back(value);
  }
  args.push_back("--seed");
  args.push_back(std::to_string(m.seed));
  args.push_back("--manifest");
  args.push_back(manifest_path + ".replay.json");
  const int code = run(args);
  if (code != 0) return code;
  int mismatches = 0;
  for (const auto& [path, sum] : m.outputs) {
    const std::string now = checksum_hex(path);
    const bool same = now == sum;
    mismatches += !same;
    std::cout << (same ? "match " : "MISMATCH ") << path << ' ' << now << '\n';
  }
  if (mismatches > 0) {
    throw ExitError(3, std::to_string(mismatches) + " output(s) differ");
  }
  return 0;
}

void add_attack_options(CLI::App* sub, AttackOptions& o) {
  sub->add_option("--omega", o.omega, "constraint spec");
  sub->add_option("--norm", o.norm, "perturbation norm: 1, 2 or inf");
  sub->add_option("--steps", o.steps, "PGD steps");
  sub->add_option("--step-scale", o.step_scale, "PGD step as a fraction of epsilon");
  sub->add_option("--init", o.init, "PGD start: zero or random");
  sub->add_option("--combo-epsilon", o.combo_epsilon,
                  "also bound ||delta||_p by this (combo mode)");
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Non-uniform adversarial training, attacks and certification"};
  app.name("nuadv");
  app.set_version_flag("--version", NUADV_VERSION);
  app.set_config("--config", "", "flat key=value config file ([subcommand] sections)");
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  std::uint64_t seed = 0;
  std::string manifest;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "seed for all randomness");
    sub->add_option("--manifest", manifest,
                    "manifest path (default: <first output>.manifest.json)");
  };

  PrepareArgs prep;
  auto* s_prep = app.add_subcommand("prepare", "stratified train/test split");
  s_prep->add_option("--input", prep.input, "raw CSV")->required();
  s_prep->add_option("--label", prep.label, "label column");
  s_prep->add_option("--drop", prep.drop, "comma-separated columns to drop");
  s_prep->add_option("--test-fraction", prep.test_fraction, "test share per class");
  s_prep->add_option("--train-out", prep.train_out, "train CSV")->required();
  s_prep->add_option("--test-out", prep.test_out, "test CSV")->required();
  common(s_prep);

  TrainArgs train;
  auto* s_train = app.add_subcommand("train", "standard or adversarial training");
  s_train->add_option("--data", train.data, "training CSV")->required();
  s_train->add_option("--label", train.label, "label column");
  s_train->add_option("--model-out", train.model_out, "model file")->required();
  s_train->add_option("--log-out", train.log_out, "per-epoch loss CSV");
  s_train->add_option("--hidden", train.hidden, "hidden widths");
  s_train->add_option("--epochs", train.epochs, "epochs");
  s_train->add_option("--batch-size", train.batch_size, "mini-batch size");
  s_train->add_option("--lr", train.learning_rate, "SGD learning rate");
  s_train->add_option("--dropout", train.dropout, "dropout rate");
  s_train->add_option("--epsilon", train.epsilon,
                      "adversarial budget; 0 trains without attacks");
  s_train->add_option("--match-l2", train.match_l2,
                      "calibrate epsilon to this mean ||delta||_2");
  s_train->add_option("--fraction", train.fraction,
                      "share of positives perturbed per epoch");
  add_attack_options(s_train, train.attack);
  common(s_train);

  AttackArgs attack;
  auto* s_attack = app.add_subcommand("attack", "PGD attack, per-sample CSV");
  s_attack->add_option("--model", attack.model, "model file")->required();
  s_attack->add_option("--data", attack.data, "CSV to attack")->required();
  s_attack->add_option("--label", attack.label, "label column");
  s_attack->add_option("--reference", attack.reference,
                       "CSV for omega statistics (default: --data)");
  s_attack->add_option("--epsilon", attack.epsilon, "budget");
  s_attack->add_option("--targets", attack.targets, "positive or all");
  s_attack->add_option("--out", attack.out, "result CSV")->required();
  add_attack_options(s_attack, attack.attack);
  common(s_attack);

  CertifyLpArgs lp;
  auto* s_lp = app.add_subcommand("certify-lp", "dual LP certification");
  s_lp->add_option("--model", lp.model, "model file")->required();
  s_lp->add_option("--data", lp.data, "CSV to certify")->required();
  s_lp->add_option("--label", lp.label, "label column");
  s_lp->add_option("--reference", lp.reference,
                   "CSV for omega statistics (default: --data)");
  s_lp->add_option("--omega", lp.omega, "constraint spec");
  s_lp->add_option("--norm", lp.norm, "perturbation norm: 1, 2 or inf");
  s_lp->add_option("--epsilon", lp.epsilon, "budget");
  s_lp->add_option("--targets", lp.targets, "positive or all");
  s_lp->add_option("--out", lp.out, "result CSV")->required();
  common(s_lp);

  CertifySmoothArgs sm;
  auto* s_sm = app.add_subcommand("certify-smooth", "randomized smoothing");
  s_sm->add_option("--model", sm.model, "model file")->required();
  s_sm->add_option("--data", sm.data, "CSV to certify")->required();
  s_sm->add_option("--label", sm.label, "label column");
  s_sm->add_option("--reference", sm.reference,
                   "CSV for noise statistics (default: --data)");
  s_sm->add_option("--noise", sm.noise,
                   "identity | md | md-target | pearson | shapley[:k] | file:<csv>");
  s_sm->add_option("--sigma", sm.sigma, "noise scale");
  s_sm->add_option("--n0", sm.n0, "selection samples");
  s_sm->add_option("--n", sm.n, "estimation samples");
  s_sm->add_option("--alpha", sm.alpha, "confidence level");
  s_sm->add_option("--targets", sm.targets, "positive or all");
  s_sm->add_option("--out", sm.out, "result CSV")->required();
  common(s_sm);

  ConsistencyArgs cons;
  auto* s_cons = app.add_subcommand("consistency", "MD-square statistics");
  s_cons->add_option("--model", cons.model, "model file")->required();
  s_cons->add_option("--data", cons.data, "reference CSV")->required();
  s_cons->add_option("--label", cons.label, "label column");
  s_cons->add_option("--perturbations", cons.perturbations, "attack CSV")
      ->required();
  s_cons->add_option("--sigma", cons.sigma, "md or md-target");
  s_cons->add_option("--epsilon", cons.epsilon, "report share with MD <= epsilon");
  s_cons->add_option("--bins", cons.bins, "histogram bins");
  s_cons->add_option("--out", cons.out, "histogram CSV")->required();
  common(s_cons);

  ImportanceArgs imp;
  auto* s_imp = app.add_subcommand("importance", "feature importance CSV");
  s_imp->add_option("--data", imp.data, "CSV")->required();
  s_imp->add_option("--label", imp.label, "label column");
  s_imp->add_option("--model", imp.model, "model file (shapley)");
  s_imp->add_option("--method", imp.method, "pearson or shapley[:k]");
  s_imp->add_option("--out", imp.out, "importance CSV")->required();
  common(s_imp);

  std::string replay_path;
  auto* s_replay = app.add_subcommand("replay", "re-run a manifest and compare outputs");
  s_replay->add_option("manifest", replay_path, "manifest file")->required();

  std::vector<const char*> argv = {"nuadv"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "nuadv: " << e.what() << '\n' << app.help();
    return 1;
  }

  if (s_replay->parsed()) return replay(replay_path);

  Context ctx;
  CLI::App* sub = app.get_subcommands().front();
  if (sub == s_prep) run_prepare(prep, seed, ctx);
  else if (sub == s_train) run_train(train, seed, ctx);
  else if (sub == s_attack) run_attack(attack, seed, ctx);
  else if (sub == s_lp) run_certify_lp(lp, seed, ctx);
  else if (sub == s_sm) run_certify_smooth(sm, seed, ctx);
  else if (sub == s_cons) run_consistency(cons, ctx);
  else if (sub == s_imp) run_importance(imp, seed, ctx);

  RunManifest m;
  m.command = sub->get_name();
  m.config = recorded_config(*sub);
  m.config.erase("seed");
  m.seed = seed;
  for (const auto& [path, role] : ctx.inputs) m.inputs[path] = checksum_hex(path);
  for (const std::string& path : ctx.outputs) m.outputs[path] = checksum_hex(path);
  m.tool_version = NUADV_VERSION;
  save_manifest(m, manifest.empty() ? ctx.outputs.front() + ".manifest.json"
                                    : manifest);
  return 0;
}

int guarded_main(const std::vector<std::string>& args) {
  try {
    return run(args);
  } catch (const ExitError& e) {
    std::cerr << "nuadv: " << e.what() << '\n';
    return e.code();
  } catch (const std::invalid_argument& e) {
    std::cerr << "nuadv: " << e.what() << '\n';
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "nuadv: numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const DataError& e) {
    std::cerr << "nuadv: data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "nuadv: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace
}  // namespace nuadv

int main(int argc, char** argv) {
  return nuadv::guarded_main(std::vector<std::string>(argv + 1, argv + argc));
}
