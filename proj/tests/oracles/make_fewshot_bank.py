#!/usr/bin/env python3
"""Writes the 17-example few-shot bank fixture (Java, one JSON object per line).

Rows are stored out of id order on purpose. Each row lists its id, the snippet
line count and the steps answered with a "None" variant.
"""
import json
import os
import sys

DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data")

# (answer_id, snippet lines, steps answered "None")
ROWS = [
    (1009, 5, {1, 5, 7}),
    (1002, 4, {7}),
    (1014, 10, {1, 6, 7}),
    (1001, 6, {1, 7}),
    (1011, 3, {5, 6, 7}),
    (1005, 8, {1, 5, 6}),
    (1017, 3, {1}),
    (1003, 7, {6, 7}),
    (1012, 9, {1, 5}),
    (1006, 10, {5, 6, 7}),
    (1015, 4, {6}),
    (1008, 6, {1, 6, 7}),
    (1004, 5, {1, 5, 6, 7}),
    (1016, 8, {7}),
    (1010, 7, {5, 7}),
    (1007, 3, {1, 5, 6, 7}),
    (1013, 9, {6, 7}),
]

NONE_SPELLINGS = ["// None", "None", "// none.", "none"]


def step_answer(step, aid, none_steps, n):
    if step in none_steps:
        return NONE_SPELLINGS[(aid + step) % len(NONE_SPELLINGS)]
    return {
        1: "import java.util.List;",
        2: "public class Chatgpt {}",
        3: "public static",
        4: "task%d" % aid,
        5: "(List<String> items)",
        6: "return result%d;" % aid,
        7: "throws Exception",
    }[step]


def row(aid, lines, none_steps):
    snippet = "\n".join("int v%d = %d;" % (i, i) for i in range(lines))
    steps = [step_answer(s, aid, none_steps, lines) for s in range(1, 8)]
    body = "\n".join("        " + l for l in snippet.split("\n"))
    code = "public class Chatgpt {\n    public static void task%d() {\n%s\n    }\n}" % (aid, body)
    return {
        "question_id": aid - 500,
        "answer_id": aid,
        "question_title": "How to do task %d in Java?" % aid,
        "question_body": "Question body %d." % aid,
        "answer_body": "Answer body %d." % aid,
        "code_snippet": snippet,
        "language": "java",
        "answer_score": 3,
        "view_count": 100,
        "tags": ["java"],
        "is_accepted": True,
        "worked_steps": steps,
        "complete_code": code,
    }


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(DATA, "fewshot", "bank17.jsonl")
    with open(out, "w", encoding="utf-8") as f:
        for aid, lines, none_steps in ROWS:
            f.write(json.dumps(row(aid, lines, none_steps)) + "\n")


if __name__ == "__main__":
    main()
