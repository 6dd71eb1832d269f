# Copyright 2026 The Intentir Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates fixtures/query_log_annotations.jsonl.

The fixture is a frozen three-annotator label set over 598 query items whose
majority-vote outcome is fixed by construction: 127 PC, 328 Ch, 54 Pe, 24 Pr,
1 In, 4 O and 60 Multi items. Tests pin those counts and the co-occurrence
pattern of the Multi pools, so this script must stay deterministic; rerun it
only together with the tests that freeze its output.
"""

import json
import random
from collections import Counter
from pathlib import Path

SINGLE_FINALS = [("PC", 127), ("Ch", 328), ("Pe", 54), ("Pr", 24), ("In", 1), ("O", 4)]
LABELS = ["PC", "Ch", "Pe", "Pr", "In", "O"]

# Multi items decided by two identical Multi votes plus one single vote.
DOUBLE_MULTI = [
    (("PC", "Ch"), 8),
    (("Ch", "Pe"), 6),
    (("Ch", "Pr"), 5),
    (("PC", "Pe"), 4),
    (("Pe", "Pr"), 3),
    (("Ch", "In"), 2),
    (("PC", "In"), 1),
]

# Multi items decided by three-way disagreement; Others votes drop out of the
# pooled intents.
DISTINCT_MULTI = [
    (("PC", "Ch", "Pe"), 7),
    (("PC", "Ch", "Pr"), 6),
    (("Ch", "Pe", "Pr"), 5),
    (("PC", "Ch", "O"), 4),
    (("Ch", "Pr", "O"), 3),
    (("PC", "Pe", "In"), 3),
    (("Ch", "Pe", "In"), 2),
    (("PC", "Pr", "In"), 1),
]

NOTES = [
    "names a specific judgment",
    "asks how the facts should be read",
    "sentence length question",
    "filing procedure question",
    "background reading",
]


def single_item(cls: str, index: int) -> list[dict]:
    if index % 5 == 3:
        others = [label for label in LABELS if label != cls]
        stray = others[index % len(others)]
        votes = [cls, cls, stray]
    else:
        votes = [cls, cls, cls]
    labels = [{"value": vote} for vote in votes]
    if index % 7 == 0:
        labels[0]["explanation"] = NOTES[index % len(NOTES)]
    return labels


def main() -> None:
    items: list[list[dict]] = []
    for cls, count in SINGLE_FINALS:
        for i in range(count):
            items.append(single_item(cls, i))
    for pair, count in DOUBLE_MULTI:
        for _ in range(count):
            multi = {"value": "M", "potential_intents": list(pair)}
            items.append([dict(multi), dict(multi), {"value": pair[0]}])
    for triple, count in DISTINCT_MULTI:
        for _ in range(count):
            items.append([{"value": vote} for vote in triple])

    rng = random.Random(20260823)
    rng.shuffle(items)

    out_path = Path(__file__).resolve().parent.parent / "fixtures"
    out_path.mkdir(exist_ok=True)
    target = out_path / "query_log_annotations.jsonl"
    with target.open("w") as out:
        for i, labels in enumerate(items, start=1):
            record = {"item_id": f"q{i:04d}", "labels": labels}
            out.write(json.dumps(record, separators=(",", ":")) + "\n")

    # Summary of what the construction freezes, for cross-checking tests.
    finals = Counter()
    pair_counts: Counter = Counter()
    for labels in items:
        votes = Counter(label["value"] for label in labels)
        value, top = votes.most_common(1)[0]
        if top >= 2 and sum(1 for c in votes.values() if c == top) == 1:
            finals[value] += 1
            if value == "M":
                pool = sorted(
                    {i for l in labels if l["value"] == "M" for i in l["potential_intents"]}
                )
                for a_i, a in enumerate(pool):
                    for b in pool[a_i + 1:]:
                        pair_counts[(a, b)] += 1
        else:
            finals["M"] += 1
            pool = sorted({label["value"] for label in labels} - {"O"})
            for a_i, a in enumerate(pool):
                for b in pool[a_i + 1:]:
                    pair_counts[(a, b)] += 1
    print("items:", len(items))
    print("finals:", dict(finals))
    print("pairs:", sum(pair_counts.values()), dict(sorted(pair_counts.items())))


if __name__ == "__main__":
    main()
