#!/usr/bin/env python3
# Copyright (c) 2026, lema-forge contributors
# SPDX-License-Identifier: Apache-2.0
"""Writes the acceptance fixture: a 200-question corpus, the mock model
transcript that answers it, and the expected outcome of every path.

The expected sets are derived from how each text was constructed, not by
running the pipeline, so the acceptance suite can check the pipeline against
them. Rerun after editing; the output is deterministic.
"""

import json
import os

HERE = os.path.dirname(os.path.abspath(__file__))
N = 200

W0 = "To be safe I round the total up by three."
W1 = "Then I add one more for good measure."
W2 = "Counting both ends adds two more."
W3 = "Then I take one away for the broken item."
W4 = "Half a unit is left over at the end."


def fnv1a64(text):
    h = 0xCBF29CE484222325
    for b in text.encode("utf-8"):
        h ^= b
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def path_hash(text):
    return "%016x" % fnv1a64(" ".join(text.split()))


def money(v):
    return "${:,}.00".format(v)


def question(i):
    a = 10 + (i * 7) % 40
    b = 12 + (i * 5) % 24
    c = 3 + (i * 11) % 50
    tag = "(#%04d)" % i
    text = (f"A farm packs {a} crates with {b} eggs in each crate and then receives "
            f"{c} loose eggs. How many eggs does the farm have in total? {tag}")
    return a, b, c, a * b + c, tag, text


def steps(a, b, c, g):
    return (f"Step 1: The crates hold {a} * {b} = {a * b} eggs.\n"
            f"Step 2: Adding the loose eggs gives {a * b} + {c} = {g} eggs.")


def main():
    corpus, rules_reasoner, rules_corrector, rules_evolve, rules_label = [], [], [], [], []
    extra_cot = []
    exp_incorrect, exp_correct, exp_unparsed, exp_kept = set(), set(), set(), set()
    statuses = {"kept": 0, "wrong_answer": 0, "parse_failed": 0}

    for i in range(N):
        a, b, c, g, tag, text = question(i)
        qid = "gsm8k-%04d" % i
        corpus.append({"v": 1, "id": qid, "task": "GSM8K", "text": text,
                       "gold_answer": {"kind": "numeric", "value": str(g)}, "origin": "original"})
        base = steps(a, b, c, g)

        correct = base + ("\nThe answer is %s." % (money(g) if i % 4 == 3 else g))
        w0 = base + f"\nStep 3: {W0} {g} + 3 = {g + 3}.\nThe answer is {g + 3}."
        w1 = base + f"\nStep 3: {W1} {g} + 1 = {g + 1}.\nThe answer is {g + 1}."
        w1_spaced = w1.replace("\n", "\n\n").replace(" = ", "  =  ")
        w2 = base + f"\nStep 3: {W2} {g} + 2 = {g + 2}.\n#### {g + 2}"
        w3 = base + f"\nStep 3: {W3} {g} - 1 = {g - 1}.\nThe answer is {g - 1}."
        w4 = base + f"\nStep 3: {W4}\nThe answer is {g}.5 eggs."
        unparsed = base + "\nSo the farm ends up with quite a lot of eggs."

        no_correct = i % 20 == 19
        a1 = w0 if no_correct else correct
        a3 = {0: unparsed, 1: w2, 2: w1_spaced, 3: w4}[i % 4]
        rules_reasoner.append({"model": "reasoner-a", "contains": [tag], "texts": [a1, w1, a3, a1]})
        b1 = w1 if i % 5 == 0 else w3
        rules_reasoner.append({"model": "reasoner-b", "contains": [tag], "texts": [b1, a1]})

        wrong = {"W1": w1}
        if no_correct:
            wrong["W0"] = w0
        else:
            exp_correct.add((qid, path_hash(correct)))
        if i % 4 == 1:
            wrong["W2"] = w2
        if i % 4 == 3:
            wrong["W4"] = w4
        if i % 4 == 0:
            exp_unparsed.add((qid, path_hash(unparsed)))
        if i % 5 != 0:
            wrong["W3"] = w3
        for t in wrong.values():
            exp_incorrect.add((qid, path_hash(t)))

        fixed = base + f"\nThe answer is {g}."
        for kind, path in sorted(wrong.items()):
            marker = {"W0": W0, "W1": W1, "W2": W2, "W3": W3, "W4": W4}[kind]
            if kind == "W1":
                outcome = "kept" if i % 2 == 0 else ("wrong_answer" if i % 4 == 1 else "missing_section")
            elif kind == "W0":
                outcome = "kept_permuted"
            elif kind == "W2":
                outcome = "kept_money" if i % 20 == 1 else "wrong_answer"
            elif kind == "W3":
                outcome = "kept" if i % 20 == 2 else ("wrong_answer" if i % 2 == 0 else "no_answer")
            else:
                outcome = "wrong_answer"

            if outcome == "kept":
                raw = (f"Incorrect Step: Step 3.\nExplanation: The step \"{marker}\" has no basis in the question.\n"
                       f"Correct Solution:\n{fixed}")
            elif outcome == "kept_permuted":
                raw = (f"explanation: Rounding up is not asked for.\nCORRECT SOLUTION:\n{fixed}\n"
                       f"incorrect step: Step 3.")
            elif outcome == "kept_money":
                raw = (f"Incorrect Step: Step 3.\nExplanation: Nothing needs to be added after Step 2.\n"
                       f"Correct Solution:\n{base}\nThe answer is {money(g)}.")
            elif outcome == "wrong_answer":
                raw = (f"Incorrect Step: Step 2.\nExplanation: The total should be {g}, but the eggs were miscounted.\n"
                       f"Correct Solution:\n{base}\nOne crate was counted twice, so {g} - {b} = {g - b}.\n"
                       f"The answer is {g - b}.")
            elif outcome == "missing_section":
                raw = f"Incorrect Step: Step 3.\nExplanation: Adding one is wrong; the answer is {g}."
            else:  # no_answer
                raw = (f"Incorrect Step: Step 3.\nExplanation: Taking one away is not justified.\n"
                       f"Correct Solution:\n{base}")
            rules_corrector.append({"model": "corrector", "contains": [tag, marker], "texts": [raw]})
            status = outcome.split("_")[0] if outcome.startswith("kept") else (
                "wrong_answer" if outcome == "wrong_answer" else "parse_failed")
            statuses[status] += 1
            if status == "kept":
                exp_kept.add((qid, path_hash(path)))

        # Evolution: three rephrasings; some identical to the seed, some duplicated.
        variants = []
        for k in (1, 2, 3):
            etag = "(#%04d-e%d)" % (i, k)
            variants.append(f"A farm packs {a} crates with {b} eggs in each crate, receives {c} loose eggs, "
                            f"and buys {k * 10} more eggs. How many eggs does the farm have now? {etag}")
        if i % 7 == 0:
            variants[2] = text
        if i % 11 == 0:
            variants[1] = variants[0]
        rules_evolve.append({"model": "evolver", "contains": ["Given problem:", tag], "texts": variants})
        for k in (1, 2, 3):
            etag = "(#%04d-e%d)" % (i, k)
            h = g + 10 * k
            answers = [h, h + 1, h + 2] if (i + k) % 5 == 0 else [h, h, h + 1]
            texts = [f"Step 1: Count everything.\nThe answer is {v}." for v in answers]
            rules_label.append({"model": "labeler", "contains": [etag], "texts": texts})

        for k in range(3):
            extra_cot.append({"v": 1, "question_id": qid, "generator": "reference", "correct": True,
                              "text": (f"Each of the {a} crates holds {b} eggs, which is {a * b} eggs. "
                                       f"With the {c} loose eggs that makes {g}." + " Checked once more." * k
                                       + f"\nThe answer is {g}."),
                              "extracted": {"kind": "numeric", "value": str(g)}, "unexpected_format": False,
                              "provenance": ["reference"]})

    # Scoring rules for the perplexity checks.
    rules_score = [
        {"model": "scorer", "contains": ["[ln2-pair]"], "token_logprobs": [-0.6931471805599453, -0.6931471805599453]},
        {"model": "scorer", "contains": [], "default_logprob": -0.25},
    ]
    script = {"rules": rules_reasoner + rules_corrector + rules_evolve + rules_label + rules_score}

    # ASDiv-style test list: 2,305 items, 221 with non-numeric gold answers.
    non_numeric = ["3 (apples)", "Mrs. Hilt", "False", "5:30", "2/3 of the cake", "blue", "10 r 3", "yes"]
    asdiv = []
    for i in range(2305):
        gold = non_numeric[i % len(non_numeric)] if i % 10 == 7 and i < 2210 else str(5 + (i * 13) % 400)
        if i % 10 == 3:
            gold = "%d.5" % (i % 90)
        asdiv.append({"v": 1, "id": "asdiv-%04d" % i, "task": "ASDiv", "text": f"ASDiv item {i}: how many?",
                      "gold_answer": gold, "origin": "original"})
    n_non_numeric = sum(1 for i in range(2305) if i % 10 == 7 and i < 2210)

    def write_jsonl(name, rows):
        with open(os.path.join(HERE, name), "w", encoding="utf-8", newline="\n") as f:
            for r in rows:
                f.write(json.dumps(r, ensure_ascii=False, separators=(",", ":")) + "\n")

    write_jsonl("corpus.jsonl", corpus)
    write_jsonl("extra_cot.jsonl", extra_cot)
    write_jsonl("asdiv_test.jsonl", asdiv)
    with open(os.path.join(HERE, "mock_script.json"), "w", encoding="utf-8", newline="\n") as f:
        json.dump(script, f, indent=1, ensure_ascii=False)
        f.write("\n")

    expected = {
        "questions": N,
        "incorrect": len(exp_incorrect),
        "correct": len(exp_correct),
        "unexpected_format": len(exp_unparsed),
        "corrections": statuses,
        "asdiv": {"total": len(asdiv), "non_numeric": n_non_numeric, "numeric": len(asdiv) - n_non_numeric},
        "incorrect_paths": sorted(list(x) for x in exp_incorrect),
        "correct_paths": sorted(list(x) for x in exp_correct),
        "kept_paths": sorted(list(x) for x in exp_kept),
    }
    with open(os.path.join(HERE, "expected.json"), "w", encoding="utf-8", newline="\n") as f:
        json.dump(expected, f, indent=1)
        f.write("\n")
    print(json.dumps({k: expected[k] for k in ("incorrect", "correct", "unexpected_format", "corrections", "asdiv")}))


if __name__ == "__main__":
    main()
