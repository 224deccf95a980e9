"""Side-by-side report for the D = 101 vs D = 229 example at p = 5."""

import json

from starkcl.stark import compare, iterate_approx
from starkcl.quadfield import make_field


def main():
    rep = compare(101, 229)
    for row in rep["claimed_example"]:
        print(f"D = {row['D']}")
        for key, flag in (("h", "h"), ("delta", "delta"), ("ord5_delta", "ord5")):
            mark = "agree" if row[f"{flag}_agrees"] else "DISAGREE"
            print(f"  {key:>10}: claimed {row[f'{key}_claimed']:>4}  computed "
                  f"{row[f'{key}_computed']:>4}  {mark}")
        for mode in ("paper_literal", "unit_realized"):
            mark = "agree" if row[f"kappa5_{mode}_agrees"] else "DISAGREE"
            print(f"  kappa5 [{mode}]: claimed {row['kappa5_claimed']}  computed "
                  f"{row[f'kappa5_{mode}']}  {mark}")
    print(f"ground truth isomorphic: {rep['ground_truth_isomorphic']}")
    for mode, v in rep["modes"].items():
        print(f"  {mode}: verdict {v['criterion_verdict']}, agreement {v['agreement']}; "
              f"extended {v['extended_verdict']}, agreement {v['extended_agreement']}")
    it = iterate_approx(make_field(101), 5, 4)
    print("iterative approximation (101, 5):", json.dumps(
        {"domain_failures": it.domain_failures,
         "partial_sum_valuations": it.to_json()["partial_sum_valuations"]}))


if __name__ == "__main__":
    main()
