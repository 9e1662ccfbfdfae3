"""Dynamic CLI option generation from RunConfig."""

from pathlib import Path
from typing import Any, Dict, Literal, Optional, get_args, get_origin

import click
import yaml

from ..types import RunConfig


def _inner_type(annotation):
    """Strip Optional[...] from a field annotation."""
    args = get_args(annotation)
    if args and type(None) in args:
        return next(a for a in args if a is not type(None))
    return annotation


def _click_type(annotation):
    inner = _inner_type(annotation)
    if get_origin(inner) is Literal:
        return click.Choice(list(get_args(inner)))
    if inner is Path:
        return click.Path(path_type=Path)
    if inner in (int, float):
        return inner
    return str


def option_name(field_name: str) -> str:
    """CLI spelling of a field (tau_fixed -> --tau-fixed, C -> --C)."""
    return f"--{field_name.replace('_', '-')}"


def generate_run_options(func):
    """Decorator that adds one CLI option per RunConfig field.

    Every option defaults to None so that only flags given on the command line
    override values from a YAML file. Boolean fields become --x/--no-x switches.
    """
    # Iterate in reverse so options appear in declaration order
    for field_name, field_info in reversed(list(RunConfig.model_fields.items())):
        name = option_name(field_name)
        description = field_info.description or field_name
        if not field_info.is_required() and field_info.default is not None:
            description += f" [default: {field_info.default}]"

        if _inner_type(field_info.annotation) is bool:
            negative = f"--no-{field_name.replace('_', '-')}"
            decorator = click.option(
                f"{name}/{negative}", field_name, default=None, help=description
            )
        else:
            decorator = click.option(
                name,
                field_name,
                type=_click_type(field_info.annotation),
                default=None,
                help=description,
            )
        func = decorator(func)
    return func


def load_yaml_config(path: Optional[Path]) -> Dict[str, Any]:
    """Read a YAML mapping of RunConfig fields (dashes or underscores)."""
    if path is None:
        return {}
    with Path(path).open(encoding="utf-8") as handle:
        loaded = yaml.safe_load(handle) or {}
    if not isinstance(loaded, dict):
        raise click.BadParameter(f"{path} must contain a mapping of run options")
    return {str(key).replace("-", "_"): value for key, value in loaded.items()}


def parse_run_config_from_cli(config_file: Optional[Path] = None, **kwargs) -> RunConfig:
    """Merge YAML values and CLI flags (flags win) into a validated RunConfig."""
    merged = load_yaml_config(config_file)
    unknown = sorted(set(merged) - set(RunConfig.model_fields))
    if unknown:
        raise click.BadParameter(f"Unknown run options in {config_file}: {', '.join(unknown)}")
    for field_name in RunConfig.model_fields:
        value = kwargs.get(field_name)
        if value is not None:
            merged[field_name] = value
    return RunConfig(**merged)


def describe_run_options():
    """Name, type, default and description of every run option."""
    options = []
    for field_name, field_info in RunConfig.model_fields.items():
        inner = _inner_type(field_info.annotation)
        if get_origin(inner) is Literal:
            type_str = " | ".join(str(a) for a in get_args(inner))
        else:
            type_str = getattr(inner, "__name__", str(inner))
        default = field_info.default
        options.append(
            {
                "name": field_name,
                "cli_option": option_name(field_name),
                "type": type_str,
                "default": None if default is None else str(default),
                "description": field_info.description or "",
            }
        )
    return options
