#!/usr/bin/env python3
# Copyright 2026 The ATK Authors
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
"""Regenerates the bundled synthetic corpora under data/.

The output is deterministic for a given --seed. Sentences are already in the
canonical tokenized form (tokens joined by single spaces).

  keywords_train.jsonl  raw sentences, keywords sampled at build time
  keywords_test.jsonl   sentences with 1-6 explicit keyword constraints
  entities_train.jsonl  (document, summary) pairs, entities tagged at build time
  entities_test.jsonl   (document, summary) pairs, 1-6 gazetteer entities each
  gazetteer.txt         one entity surface per line
"""

import argparse
import json
import os
import random

ADJ = """leading global local major small large new old strong weak quiet busy
modern ancient popular famous rare common cheap expensive fresh simple complex
rapid slow bright dark warm cold heavy light private public rural urban early
late annual daily digital financial medical legal social cultural historic
friendly helpful careful skilled young senior junior regional national
independent successful difficult reliable efficient delicious spicy crispy
tender cozy spacious noisy clean dirty elegant""".split()

NOUN = """company provider software currency industry market bank service
customer manager report price deal plan system network product project city
region school student teacher hospital doctor patient nurse court judge lawyer
team player coach season match stadium fan ticket restaurant menu chef dish
salon nail hotel room staff airport flight pilot passenger station train
river bridge road driver factory worker union farm farmer crop harvest museum
artist painting gallery festival concert singer band album film director
studio actor camera phone device battery screen computer engineer data
website platform startup investor fund budget tax policy election voter
minister council mayor agency official police officer crime suspect victim
weather storm rain flood summer winter morning evening weekend breakfast
dinner coffee pizza burger salad dessert wine beer bakery bread cake
library book author reader newspaper editor journalist story interview
village garden park forest mountain beach island lake ocean""".split()

VERB = """launched announced opened closed reported signed approved rejected
delivered built designed sold bought hired visited praised criticized
expanded reduced increased improved released recorded served cooked
painted wrote read studied won lost defended attacked supported joined
left reached finished started changed moved shared tested repaired""".split()

ADV = """quickly slowly recently finally suddenly quietly openly rarely
usually always never often gladly proudly easily barely""".split()

PLACE_NOUN = """downtown market harbor suburb campus district neighborhood
valley coast capital""".split()

TIME = ["on monday", "on tuesday", "on friday", "last week", "last year",
        "this morning", "next month", "in march", "in june", "in october",
        "this weekend", "last night"]

PERSON = """Amir Khan|Manny Pacquiao|Floyd Mayweather Jr|Bob Arum|Chris Algieri
|Maria Lopez|John Smith|Anna Weber|Kenji Tanaka|Priya Patel|Lucas Martin
|Sofia Rossi|Omar Haddad|Elena Petrova|David Kim|Grace Chen|Tom Becker
|Laura Silva|Ahmed Saleh|Nina Novak|Paul Dubois|Hannah Berg|Carlos Ruiz
|Yuki Sato|Ivan Horvat|Chris Gallizzi|Emma Clarke|Mark Jensen|Olivia Brown
|Leo Fischer|Khan|Pacquiao|Mayweather|Arum|Lopez|Tanaka|Patel""".replace(
    "\n", "").split("|")

PLACE = """Abu Dhabi|UAE|Las Vegas|New York|Paris|London|Tokyo|Berlin|Madrid
|Rome|Cairo|Mumbai|Sydney|Toronto|Chicago|Boston|Lisbon|Vienna|Dublin
|Seoul|Oslo|Prague|Athens|Dubai|Manila|Lima|Nairobi|Geneva|Miami|Denver
|Middle East|Texas|California|Bavaria""".replace("\n", "").split("|")

ORG = """Apple|Nintendo|Hyperkin|Game Boy|United Nations|Red Cross
|World Bank|Acme Corp|Globex|Initech|Umbrella Group|Stark Industries
|Wayne Enterprises|Northwind Traders|Contoso|Fabrikam|Tailspin Toys
|Blue Harbor Bank|Pioneer Motors|Summit Airlines|Riverside Hospital
|City Council|Premier League|Olympic Committee""".replace("\n", "").split("|")

FILLER_EN = [
    "the {n} was {a} and the {n2} was {a2} .",
    "officials said the {n} would {v_pres} the {n2} {t} .",
    "many {n}s were {a} after the {n2} {t} .",
    "the {a} {n} remains {a2} according to the {n2} .",
    "critics {v} the {a} {n} {t} .",
]


def pick(rng, xs):
  return xs[rng.randrange(len(xs))]


def keyword_sentence(rng):
  a1, a2, a3 = rng.sample(ADJ, 3)
  n1, n2, n3, n4 = rng.sample(NOUN, 4)
  v1, v2 = rng.sample(VERB, 2)
  adv = pick(rng, ADV)
  t = pick(rng, TIME)
  pn = pick(rng, PLACE_NOUN)
  patterns = [
      f"the {a1} {n1} {v1} a {a2} {n2} {t} .",
      f"the {n1} is a {a1} provider of {n2} {n3} {n4} to the {a2} industry .",
      f"a {a1} {n1} in the {pn} {adv} {v1} the {n2} {n3} {t} .",
      f"our {n1} {v1} the {a1} {n2} and {v2} a {a2} {n3} .",
      f"this is the very best {n1} {n2} ! i {adv} see the {a1} {n3} .",
      f"the {a1} {n1} said the {n2} {v1} {adv} after the {a2} {n3} .",
      f"{t} , the {n1} {v1} a {a1} {n2} for the {a2} {n3} {n4} .",
      f"the {n1} and the {n2} {v1} a {a1} {n3} near the {pn} .",
      f"i have been going to this {a1} {n1} for a year and the {n2} is {a2} .",
      f"the {a1} {n1} {adv} {v1} its {n2} , and the {n3} {v2} the {a3} {n4} .",
      f"a {n1} {n2} {v1} the {a1} {n3} {t} , the {n4} said .",
      f"they {adv} {v1} a {a1} {n1} with {a2} {n2} and {a3} {n3} .",
  ]
  return pick(rng, patterns)


PRESENT = {
    "launched": "launch", "announced": "announce", "opened": "open",
    "closed": "close", "signed": "sign", "approved": "approve",
    "delivered": "deliver", "built": "build", "sold": "sell",
    "hired": "hire", "visited": "visit", "expanded": "expand",
}


def filler_sentence(rng):
  n, n2 = rng.sample(NOUN, 2)
  a, a2 = rng.sample(ADJ, 2)
  v = pick(rng, VERB)
  v_pres = pick(rng, sorted(PRESENT.values()))
  t = pick(rng, TIME)
  tpl = pick(rng, FILLER_EN)
  return tpl.format(n=n, n2=n2, a=a, a2=a2, v=v, v_pres=v_pres, t=t)


# Clause templates keyed by entity-slot count. P=person, L=place, O=org.
CLAUSES = {
    1: [
        ("police in {L} are searching for a missing {n} .", "L"),
        ("{P} said the {a} {n} was a success .", "P"),
        ("{O} {v} a {a} {n} {t} .", "O"),
        ("the {a} {n} in {L} {v} {t} .", "L"),
        ("{P} is a hero of the {a} {n} .", "P"),
    ],
    2: [
        ("{P} could face {P} in a {a} {n} .", "PP"),
        ("{P} has joined {O} as a {a} {n} .", "PO"),
        ("{O} {v} a {n} in {L} {t} .", "OL"),
        ("{P} will be ringside in {L} {t} .", "PL"),
        ("{O} signed a {a} {n} with {O} .", "OO"),
    ],
    3: [
        ("{P} could face {P} in {L} {t} .", "PPL"),
        ("{P} must first win a {n} with {P} in {L} .", "PPL"),
        ("{O} and {O} {v} a {a} {n} in {L} .", "OOL"),
        ("{P} of {O} {v} the {n} in {L} .", "POL"),
    ],
}


def fill_clause(rng, tpl, kinds, used):
  ents = []
  for kind in kinds:
    pool = {"P": PERSON, "L": PLACE, "O": ORG}[kind]
    while True:
      e = pick(rng, pool)
      if e not in used:
        break
    used.add(e)
    ents.append(e)
  it = iter(ents)
  out = []
  # Substitute entity slots in order, then ordinary slots.
  i = 0
  while i < len(tpl):
    if tpl.startswith("{P}", i) or tpl.startswith("{L}", i) or tpl.startswith(
        "{O}", i):
      out.append(next(it))
      i += 3
    else:
      out.append(tpl[i])
      i += 1
  s = "".join(out)
  s = s.format(n=pick(rng, NOUN), a=pick(rng, ADJ), v=pick(rng, VERB),
               t=pick(rng, TIME))
  return s, ents


def split_counts(rng, k):
  parts = []
  while k > 0:
    c = rng.randint(1, min(3, k))
    parts.append(c)
    k -= c
  return parts


def entity_record(rng, k):
  used = set()
  # Single-token person names overlap multi-token ones ("Khan" in
  # "Amir Khan"); forbid re-using either inside one record.
  clauses = []
  for c in split_counts(rng, k):
    tpl, kinds = pick(rng, CLAUSES[c])
    s, ents = fill_clause(rng, tpl, kinds, used)
    for e in ents:
      for tok in e.split():
        used.add(tok)
    clauses.append(s)
  summary = " ".join(clauses)
  doc = clauses + [filler_sentence(rng) for _ in range(rng.randint(2, 4))]
  rng.shuffle(doc)
  return {"source": " ".join(doc), "target": summary}


STOP = None


def eligible(tokens):
  seen = {}
  for t in tokens:
    seen[t] = seen.get(t, 0) + 1
  out = []
  for t in tokens:
    if seen[t] != 1 or t.lower() in STOP:
      continue
    if all(not ch.isalnum() for ch in t):
      continue
    out.append(t)
  return out


def write_jsonl(path, records):
  with open(path, "w") as f:
    for r in records:
      f.write(json.dumps(r, ensure_ascii=False) + "\n")


def main():
  global STOP
  ap = argparse.ArgumentParser()
  ap.add_argument("--out", default=os.path.join(
      os.path.dirname(os.path.abspath(__file__)), "..", "data"))
  ap.add_argument("--seed", type=int, default=2026)
  args = ap.parse_args()
  rng = random.Random(args.seed)
  with open(os.path.join(args.out, "stopwords_en.txt")) as f:
    STOP = {w.strip() for w in f if w.strip()}

  toy = os.path.join(args.out, "toy")
  os.makedirs(toy, exist_ok=True)

  train = [{"id": f"kw-train-{i}", "source": None,
            "target": keyword_sentence(rng)} for i in range(4500)]
  write_jsonl(os.path.join(toy, "keywords_train.jsonl"), train)

  test = []
  for i in range(600):
    k = i % 6 + 1
    while True:
      s = keyword_sentence(rng)
      el = eligible(s.split())
      if len(el) >= k:
        break
    chosen = sorted(rng.sample(range(len(el)), k))
    test.append({"id": f"kw-test-{i}", "source": None, "target": s,
                 "constraints": [el[j] for j in chosen]})
  write_jsonl(os.path.join(toy, "keywords_test.jsonl"), test)

  etrain = []
  for i in range(2500):
    r = entity_record(rng, rng.randint(1, 6))
    etrain.append({"id": f"ent-train-{i}", **r})
  write_jsonl(os.path.join(toy, "entities_train.jsonl"), etrain)

  etest = []
  for i in range(600):
    r = entity_record(rng, i % 6 + 1)
    etest.append({"id": f"ent-test-{i}", **r})
  write_jsonl(os.path.join(toy, "entities_test.jsonl"), etest)

  with open(os.path.join(args.out, "gazetteer.txt"), "w") as f:
    for e in sorted(set(PERSON + PLACE + ORG)):
      f.write(e + "\n")


if __name__ == "__main__":
  main()
