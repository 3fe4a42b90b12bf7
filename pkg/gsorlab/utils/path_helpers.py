import os

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def get_project_dir(*args):
    """
    Constructs a path relative to the package base directory.
    :param args: Path components relative to the base directory.
    :return: Absolute path as a string.
    """
    return os.path.join(BASE_DIR, *args)


def get_sample_plans_dir():
    """
    Constructs a path to the bundled sample experiment plans.
    :return: Absolute path as a string with trailing slash.
    """
    return f"{get_project_dir('experiments', 'sample_plans')}/"


def get_sample_plan_file(plan_name):
    """
    Constructs a path to a specific sample plan YAML file.
    :param plan_name: Plan name without extension (e.g., 'lc_protocol').
    :return: Absolute path as a string.
    """
    return os.path.join(get_sample_plans_dir(), f"{plan_name}.yaml")


def list_sample_plans():
    return sorted(
        name[: -len(".yaml")]
        for name in os.listdir(get_sample_plans_dir())
        if name.endswith(".yaml")
    )


def get_output_path(out_dir, file_name):
    """
    Joins an output directory and file name, creating the directory if needed.
    :param out_dir: Directory for command outputs.
    :param file_name: Name of the file to write.
    :return: Absolute path as a string.
    """
    os.makedirs(out_dir, exist_ok=True)
    return os.path.abspath(os.path.join(out_dir, file_name))
