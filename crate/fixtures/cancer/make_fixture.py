"""Writes the synthetic response cache for the 5-variable cancer fixture.

The answers are invented (seeded), not recorded from any model. They give
the replay tests a realistic mix: mostly consistent answers, noisy
reverse questions, unparseable replies that succeed on retry, and one
question that never yields a usable answer.
"""

import hashlib
import json
import random
from pathlib import Path

HERE = Path(__file__).parent
DATASET = json.loads((HERE / "cancer.json").read_text())
DESCRIPTIONS = json.loads((HERE / "cancer.descriptions.json").read_text())
MODEL = "synthetic-fixture"
VERBS = ["cause", "provoke", "affect", "influence", "lead to",
         "impact", "drive", "induce", "trigger", "determine"]
PREAMBLE = ('Consider two variables: "{source}" and "{target}"; '
            'Does the first {verb} the second?')
INSTRUCTION = "Reply only with a true or a false"
REPEATS = 10

# probability of a "true" answer per ordered pair
P_TRUE = {
    ("Pollution", "Smoker"): 0.3, ("Smoker", "Pollution"): 0.3,
    ("Xray", "Dyspnoea"): 0.4, ("Dyspnoea", "Xray"): 0.3,
}


def template_hash():
    h = hashlib.sha256()
    h.update(PREAMBLE.encode() + b"\0")
    for v in VERBS:
        h.update(v.encode() + b"\0")
    h.update(INSTRUCTION.encode())
    return h.digest()[:8].hex()


def descendants(names, edges):
    out = {n: set() for n in names}
    changed = True
    for a, b in edges:
        out[a].add(b)
    while changed:
        changed = False
        for a in names:
            extra = set().union(*(out[b] for b in out[a])) - out[a]
            if extra:
                out[a] |= extra
                changed = True
    return out


def main():
    rng = random.Random(4)
    names = [v["name"] for v in DATASET["variables"]]
    desc = descendants(names, DATASET["true_edges"])
    thash = template_hash()
    lines = []
    for si, s in enumerate(names):
        for ti, t in enumerate(names):
            if s == t:
                continue
            if (s, t) in P_TRUE:
                p = P_TRUE[(s, t)]
            elif t in desc[s]:
                p = 0.9
            elif s in desc[t]:
                p = 0.15
            else:
                p = 0.5
            for verb in VERBS[:REPEATS]:
                answer = "True" if rng.random() < p else "False"
                replies = [answer + rng.choice(["", ".", "!"])]
                if rng.random() < 0.05:
                    replies.insert(0, rng.choice(["It depends.", "Possibly", "I cannot say."]))
                if (s, t, verb) == ("Dyspnoea", "Cancer", "impact"):
                    replies = ["Unclear.", "Maybe", "It depends on context."]
                for attempt, raw in enumerate(replies):
                    word = raw.strip(".!").lower()
                    lines.append(json.dumps({
                        "dataset": DATASET["name"],
                        "model": MODEL,
                        "source": s,
                        "target": t,
                        "source_index": si,
                        "target_index": ti,
                        "verb": verb,
                        "template_hash": thash,
                        "attempt": attempt,
                        "raw_response": raw,
                        "parsed": {"true": True, "false": False}.get(word),
                        "timestamp": 0,
                    }))
    (HERE / "cancer.responses.jsonl").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
