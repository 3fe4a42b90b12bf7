import sys

from gsorlab.experiments.plan_executor import PlanExecutor
from gsorlab.utils.path_helpers import get_sample_plan_file, list_sample_plans


if __name__ == "__main__":
    """
    Run one of the bundled experiment plans, e.g.
        python -m gsorlab.scripts.run_sample_plan darcy_protocol
    Outputs land under ./results/.
    """

    PLAN_NAME = sys.argv[1] if len(sys.argv) > 1 else "lc_protocol"
    if PLAN_NAME not in list_sample_plans():
        sys.exit(f"unknown plan {PLAN_NAME!r}; available: {', '.join(list_sample_plans())}")

    executor = PlanExecutor()
    context = executor.execute_plan_file(get_sample_plan_file(PLAN_NAME))
    failed = [name for name, value in context.items() if value.get("status") == "failure"]
    if failed:
        sys.exit(f"failed steps: {', '.join(failed)}")
