#!/usr/bin/env python3
"""Deterministic 500-post dump used by the end-to-end golden test.

Regenerating (should never be needed; the goldens are frozen against the
checked-in file):  python3 gen_fixture.py > fixture_dump.ndjson
"""
import json
import random

rng = random.Random(7)

SUBREDDITS = ["opiates", "opiaterecovery", "drugs"]
FILLER = [
    "yesterday", "friend", "morning", "week", "water", "feeling", "advice",
    "tolerance", "nausea", "pain", "doctor", "script", "pharmacy", "help",
    "experience", "body", "sleep", "work", "money", "story",
]
SUBSTANCE = {
    "Heroin": ["heroin", "dope", "tar", "smack", "h", "bth"],
    "Oxycodone": ["oxycodone", "oxy", "roxy", "percocet", "oc", "30s"],
    "Fentanyl": ["fentanyl", "fent", "patch"],
    "Kratom": ["kratom"],
    "Methadone": ["methadone"],
    "Buprenorphine": ["suboxone", "subs", "bupe"],
}
ROA = {
    "Intravenous": ["iv", "vein", "intravenous", "bloodstream"],
    "Intranasal": ["snort", "sniff", "rail", "nose"],
    "Oral": ["swallow", "oral", "mouth", "gulp"],
    "Sublingual": ["sublingual", "tongue"],
    "Smoking": ["smoke", "foil", "vaporize"],
    "Rectally": ["plug", "boof", "rectal"],
}
TAMPERING = {
    "Dissolve": ["dissolve", "dilute"],
    "Extract": ["cwe", "extract"],
    "Grind": ["crush", "grind"],
}

AUTHORS = ["user%02d" % i for i in range(48)] + ["[deleted]"] * 4

Q_STARTS = [1514764800, 1522540800, 1530403200, 1538352000]  # 2018 quarters


def sentence(words):
    rng.shuffle(words)
    return " ".join(words) + "."


def pick(cat_terms):
    cat = rng.choice(list(cat_terms))
    return rng.choice(cat_terms[cat])


lines = []
for i in range(500):
    sents = []
    n_sents = rng.randint(1, 4)
    for s in range(n_sents):
        words = rng.sample(FILLER, rng.randint(3, 6))
        roll = rng.random()
        if roll < 0.45:  # substance + roa in the same sentence
            words += [pick(SUBSTANCE), pick(ROA)]
        elif roll < 0.60:  # substance only
            words.append(pick(SUBSTANCE))
        elif roll < 0.70:  # roa only
            words.append(pick(ROA))
        elif roll < 0.80:  # tampering next to a substance
            words += [pick(TAMPERING), pick(SUBSTANCE)]
        sents.append(sentence(words))
    text = " ".join(sents)

    rec = {
        "id": "t1_%05d" % i,
        "author": rng.choice(AUTHORS),
        "subreddit": rng.choice(SUBREDDITS),
        "created_utc": rng.choice(Q_STARTS) + rng.randint(0, 7000000),
    }
    if rng.random() < 0.15:
        cut = max(1, len(text) // 3)
        rec["title"] = text[:cut]
        rec["selftext"] = text[cut:]
    else:
        rec["body"] = text
    lines.append(json.dumps(rec, sort_keys=True))

print("\n".join(lines))
