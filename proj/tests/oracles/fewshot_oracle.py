#!/usr/bin/env python3
"""Brute-force few-shot selection over every k-subset of a bank file.

Score: (number of distinct steps with a non-"None" answer, max - min snippet
line count), higher is better; ties go to the smallest sorted id tuple.
The chosen examples are reported in bank order.
"""
import itertools
import json
import re
import sys

NONE_RE = re.compile(r"^\s*(//|#)?\s*none\s*\.?\s*$", re.IGNORECASE)


def is_none(answer):
    return answer.strip() == "" or NONE_RE.match(answer) is not None


def line_count(snippet):
    s = snippet.strip()
    return 0 if not s else len(s.split("\n"))


def main():
    bank_path, k = sys.argv[1], int(sys.argv[2])
    bank = [json.loads(l) for l in open(bank_path, encoding="utf-8") if l.strip()]
    best = None
    for combo in itertools.combinations(range(len(bank)), k):
        covered = {i for c in combo for i, a in enumerate(bank[c]["worked_steps"]) if not is_none(a)}
        lines = [line_count(bank[c]["code_snippet"]) for c in combo]
        score = (len(covered), max(lines) - min(lines))
        ids = tuple(sorted(bank[c]["answer_id"] for c in combo))
        key = (-score[0], -score[1], ids)
        if best is None or key < best[0]:
            best = (key, combo, score)
    key, combo, score = best
    print(json.dumps({
        "k": k,
        "subsets": len(list(itertools.combinations(range(len(bank)), k))),
        "coverage": score[0],
        "spread": score[1],
        "selected_answer_ids": [bank[c]["answer_id"] for c in sorted(combo)],
    }))


if __name__ == "__main__":
    main()
