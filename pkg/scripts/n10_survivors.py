"""Detail for every rule-stage survivor at n=10: layers, classes, sign verdicts."""

from mtlz.catalog import PipelineConfig, run_pipeline


def main():
    cat = run_pipeline(PipelineConfig(10, frozenset({"properties", "rules", "signs"})))
    survivors = cat.allowed(10)
    print(f"{len(survivors)} survivors at n=10\n")
    for e in survivors:
        print(f"{e.graph6:<12} {e.name or '-':<10} m={e.m:<3} layers={e.layer_sizes} |Aut|={e.aut_order} "
              f"classes={e.orientation_classes} signs={e.sign_status}")


if __name__ == "__main__":
    main()
