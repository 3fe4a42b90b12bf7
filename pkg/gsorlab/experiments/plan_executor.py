import logging
import re

import yaml

from gsorlab.config.logging_config import setup_logging
from gsorlab.errors import ConfigError
from gsorlab.experiments.commands import COMMAND_REGISTRY, run_command
from gsorlab.experiments.run_config import build_config, load_config_file

# {name}, {name.key}, {name[0]}, {name.key[1].other}
PLACEHOLDER = re.compile(r"\{([A-Za-z_]\w*(?:\.\w+|\[\d+\])*)\}")
PATH_TOKEN = re.compile(r"\.(\w+)|\[(\d+)\]")


class PlanExecutor:
    """
    Runs YAML experiment plans: a ``task`` name and a list of ``steps``.

    Each step names a ``command`` from the command registry, its ``arguments``
    (RunConfig keys, optionally with a ``config`` file underneath) and an
    optional ``output_var``. A step may instead ``loop`` over a list, running
    its nested ``steps`` once per item with the loop variable in scope.
    """

    def __init__(self, defaults=None):
        setup_logging()
        self.plan_context = {}
        self.defaults = dict(defaults or {})
        self.command_registry = dict(COMMAND_REGISTRY)

    def execute_plan(self, plan_yaml):
        plan = yaml.safe_load(plan_yaml)
        if not isinstance(plan, dict):
            raise ConfigError("plan must be a mapping with 'task' and 'steps'")
        logging.info(f"Executing plan: {plan.get('task', 'unnamed')}")
        for step in plan.get("steps", []):
            self._execute_step(step)
        return self.plan_context

    def execute_plan_file(self, path):
        with open(path, "r") as f:
            return self.execute_plan(f.read())

    def _execute_loop(self, loop_variable, loop_over, steps, additional_context=None):
        """
        Runs nested steps once per item of a list.

        Args:
            loop_variable (str): Name bound to the current item.
            loop_over (list | str): A literal list or a placeholder resolving to one.
            steps (list): Nested steps.
            additional_context (dict, optional): Enclosing loop variables.
        """
        context = {**self.plan_context, **(additional_context or {})}
        try:
            items = self._resolve_value(loop_over, context)
        except ConfigError as e:
            logging.error(f"Loop variable '{loop_variable}': {e}")
            return
        if not isinstance(items, list):
            logging.error(
                f"Loop variable '{loop_variable}' cannot iterate over {loop_over!r} (got {items!r})"
            )
            return

        for item in items:
            loop_context = {**(additional_context or {}), loop_variable: item}
            logging.info(f"Loop iteration with {loop_variable} = {item}")
            for step in steps:
                self._execute_step(step, additional_context=loop_context)

    def _execute_step(self, step, additional_context=None):
        """
        Executes a single plan step.

        Args:
            step (dict): name, command, arguments, output_var; or loop + steps.
            additional_context (dict, optional): Loop variables in scope.
        """
        loop = step.get("loop")
        if loop:
            self._execute_loop(
                loop.get("variable"),
                loop.get("over"),
                step.get("steps", []),
                additional_context=additional_context,
            )
            return

        step_name = step.get("name", "Unnamed Step")
        command = step.get("command")
        args = step.get("arguments", {}) or {}
        output_var = step.get("output_var")

        logging.info(f"Executing Step: {step_name}")
        logging.debug(f"Step Details: {step}")

        if command not in self.command_registry:
            logging.error(f"Command '{command}' not implemented.")
            self._store(output_var, {"status": "failure", "error": f"unknown command {command!r}"})
            return

        try:
            resolved = self._resolve_arguments(args, additional_context)
            config_file = resolved.pop("config", None)
            file_values = load_config_file(config_file) if config_file else {}
            config = build_config(command, {**self.defaults, **file_values}, resolved)
            result = run_command(config)
        except Exception as e:
            logging.error(f"Error executing command '{command}' in step '{step_name}': {e}")
            self._store(output_var, {"status": "failure", "error": str(e)})
            return

        self._store(output_var, {"status": "success", **result.to_dict()})
        logging.info(f"Step '{step_name}' completed with exit code {int(result.exit_code)}")

    def _store(self, output_var, value):
        if output_var:
            self.plan_context[output_var] = value

    def _resolve_arguments(self, args, additional_context=None):
        """Resolves placeholders in strings, nested lists and mappings."""
        context = {**self.plan_context, **(additional_context or {})}
        if not isinstance(args, dict):
            raise ConfigError(f"step arguments must be a mapping, got {args!r}")
        return {key: self._resolve_value(value, context) for key, value in args.items()}

    def _resolve_value(self, value, context):
        if isinstance(value, list):
            return [self._resolve_value(v, context) for v in value]
        if isinstance(value, dict):
            return {k: self._resolve_value(v, context) for k, v in value.items()}
        if not isinstance(value, str):
            return value

        whole = PLACEHOLDER.fullmatch(value)
        if whole:
            # a lone placeholder keeps the referenced value's type
            return self._lookup(whole.group(1), context)
        return PLACEHOLDER.sub(lambda m: str(self._lookup(m.group(1), context)), value)

    @staticmethod
    def _lookup(path, context):
        """
        Follows a dotted/indexed path such as ``bounds.payload.selected.tau``.

        Raises:
            ConfigError: Unknown name, key or index.
        """
        head = re.match(r"[A-Za-z_]\w*", path).group(0)
        if head not in context:
            raise ConfigError(f"unresolved placeholder {{{path}}}")
        value = context[head]
        for key, index in PATH_TOKEN.findall(path[len(head):]):
            try:
                value = value[int(index)] if index else value[key]
            except (KeyError, IndexError, TypeError) as e:
                raise ConfigError(f"cannot resolve {{{path}}}: {e}") from e
        return value
