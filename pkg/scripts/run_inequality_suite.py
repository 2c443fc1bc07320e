"""Run the inequality suite and print a one-line summary per report."""

import argparse

from abcfrac.inequality_lab import reports_to_json, run_suite, suite_passed


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--h", type=float, default=2e-3)
    ap.add_argument("--alpha", type=float, default=0.5)
    ap.add_argument("--json", help="also write the JSON reports here")
    args = ap.parse_args()

    reports = run_suite(h=args.h, alpha=args.alpha)
    for r in reports:
        flag = "PASS" if r.passed else "FAIL"
        tag = " [experimental]" if r.experimental else ""
        print(f"{flag} {r.property_name:45s} worst {r.worst_violation:+.3e} tol {r.tolerance_used:.1e}{tag}")
    print("suite green" if suite_passed(reports) else "suite RED")
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(reports_to_json(reports))


if __name__ == "__main__":
    main()
