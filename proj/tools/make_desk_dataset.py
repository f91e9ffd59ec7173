#!/usr/bin/env python3
# Copyright 2026 The vprobe Authors
#
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
"""Writes the bundled desk-scale dataset under data/desk.

The corpus is synthetic office mail. Some messages are repeated so that a
byte n-gram trained on it memorizes them; examples split a corpus message
into a prefix and the bytes that follow.
"""

import argparse
import json
import pathlib
import random

FIRST = ["Ana", "Bo", "Cyd", "Dara", "Eli", "Fen", "Gus", "Hana", "Ivo", "Jun",
         "Kit", "Lev", "Mina", "Noor", "Oto", "Pia", "Quin", "Rafe", "Sol", "Tam"]
LAST = ["Abbot", "Brandt", "Castell", "Dunmore", "Ekwall", "Fairley", "Gorsky",
        "Halvard", "Ingram", "Jessup", "Kolb", "Lindqvist", "Marlow", "Nadeau"]
TOPICS = ["the Q3 budget", "the vendor contract", "the pipeline outage",
          "the offsite agenda", "the audit findings", "the gas nomination",
          "the hiring plan", "the storage lease", "the west desk report",
          "the trading limits", "the risk memo", "the expense policy"]
DAYS = ["Monday", "Tuesday", "Wednesday", "Thursday", "Friday"]
ACTIONS = ["send me the revised numbers", "review the attached draft",
           "loop in legal before signing", "book the large conference room",
           "hold off on the wire transfer", "confirm the volumes with ops",
           "update the tracking sheet", "call the counterparty back"]
CLOSINGS = ["Thanks,", "Best,", "Regards,", "Cheers,", "Talk soon,"]


def phone(rng):
    return "713-%03d-%04d" % (rng.randrange(200, 1000), rng.randrange(10000))


def message(rng):
    sender = "%s %s" % (rng.choice(FIRST), rng.choice(LAST))
    to = rng.choice(FIRST)
    topic = rng.choice(TOPICS)
    lines = [
        "Subject: %s" % topic.replace("the ", "").title(),
        "%s," % to,
        "Quick note on %s. Can you %s by %s %d:%02d? Call %s, ext. %d." % (
            topic, rng.choice(ACTIONS), rng.choice(DAYS), rng.randrange(8, 18),
            rng.choice([0, 15, 30, 45]), phone(rng), rng.randrange(1000, 10000)),
        "If anything changes, let me know.",
        rng.choice(CLOSINGS),
        sender,
    ]
    return "\n".join(lines) + "\n"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "desk"))
    parser.add_argument("--seed", type=int, default=2026)
    parser.add_argument("--messages", type=int, default=360)
    parser.add_argument("--examples", type=int, default=48)
    parser.add_argument("--prefix-bytes", type=int, default=96)
    parser.add_argument("--suffix-bytes", type=int, default=24)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    messages = [message(rng) for _ in range(args.messages)]
    # Repetition r in {1, 2, 4, 8}: heavier duplication, stronger memorization.
    repeats = [rng.choice([1, 1, 2, 4, 8]) for _ in messages]
    corpus = []
    for text, r in zip(messages, repeats):
        corpus.extend([text] * r)
    rng.shuffle(corpus)

    chosen = rng.sample(range(len(messages)), args.examples)
    examples = []
    for n, i in enumerate(chosen):
        text = messages[i]
        # The suffix starts a few bytes before the phone number.
        cut = text.index("713-") - rng.randrange(0, 5)
        prefix = text[max(0, cut - args.prefix_bytes):cut]
        suffix = text[cut:cut + args.suffix_bytes]
        examples.append({"id": "desk-%03d" % n, "prefix_text": prefix,
                         "suffix_text": suffix, "repetitions": repeats[i]})

    members = [messages[i].replace("\n", " ") for i in range(0, 16)]
    nonmembers = [message(rng).replace("\n", " ") for _ in range(16)]

    with open(out / "corpus.jsonl", "w", encoding="utf-8") as f:
        for text in corpus:
            f.write(json.dumps({"text": text}) + "\n")
    with open(out / "examples.jsonl", "w", encoding="utf-8") as f:
        for ex in examples:
            f.write(json.dumps(ex) + "\n")
    (out / "members.txt").write_text("\n".join(members) + "\n", encoding="utf-8")
    (out / "nonmembers.txt").write_text("\n".join(nonmembers) + "\n", encoding="utf-8")
    print("wrote %d corpus documents, %d examples to %s" % (len(corpus), len(examples), out))


if __name__ == "__main__":
    main()
