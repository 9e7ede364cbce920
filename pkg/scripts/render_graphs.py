from pathlib import Path
import sys

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from starx.catalog import available, load_term
from starx.config import get_settings
from starx.services.graph import explore_graph
from starx.services.reduction import RuleOptions
from starx.terms import is_linear


def main() -> None:
    settings = get_settings()
    out_dir = ROOT / "graphs"
    out_dir.mkdir(exist_ok=True)
    variants = {"": RuleOptions.from_settings(settings), "-nocutc": RuleOptions(cutc=False)}
    for name in available():
        for suffix, options in variants.items():
            term = load_term(name)
            calculus = "star" if is_linear(term) else "x"
            graph = explore_graph(term, settings.max_nodes, settings.fuel, calculus=calculus, options=options)
            path = out_dir / f"{name}{suffix}.dot"
            path.write_text(graph.to_dot(settings.label_width), encoding="utf-8")
            print(f"{path.name}: {len(graph.nodes)} terms, {len(graph.edges)} steps")


if __name__ == "__main__":
    main()
