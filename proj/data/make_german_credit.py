#!/usr/bin/env python3
# Copyright 2026 The nuadv Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Converts the UCI Statlog German Credit `german.data` file to german_credit.csv.

Non-ordinal categorical attributes (credit history, purpose, personal status,
other debtors, property, other installment plans, housing, job) are dropped.
Ordinal attributes are mapped to integers in UCI code order; discrete values are kept as-is and
treated as continuous downstream. The label is 1 for the "bad" class.

Usage: make_german_credit.py german.data > german_credit.csv
"""

import csv
import sys

CHECKING = {"A11": 0, "A12": 1, "A13": 2, "A14": 3}
SAVINGS = {"A61": 0, "A62": 1, "A63": 2, "A64": 3, "A65": 4}
EMPLOYMENT = {"A71": 0, "A72": 1, "A73": 2, "A74": 3, "A75": 4}
TELEPHONE = {"A191": 0, "A192": 1}
FOREIGN = {"A202": 0, "A201": 1}

HEADER = [
    "checking_status", "duration", "credit_amount", "savings", "employment",
    "installment_rate", "residence_since", "age", "existing_credits",
    "num_dependents", "telephone", "foreign_worker", "label",
]


def main(path):
  out = csv.writer(sys.stdout, lineterminator="\n")
  out.writerow(HEADER)
  with open(path) as f:
    for line in f:
      a = line.split()
      if not a:
        continue
      out.writerow([
          CHECKING[a[0]], a[1], a[4], SAVINGS[a[5]], EMPLOYMENT[a[6]], a[7],
          a[10], a[12], a[15], a[17], TELEPHONE[a[18]], FOREIGN[a[19]],
          1 if a[20] == "2" else 0,
      ])


if __name__ == "__main__":
  main(sys.argv[1])
