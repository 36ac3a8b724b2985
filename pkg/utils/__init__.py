from .parsing import parse_k_spec, parse_config_file
from .output import OutputFormatter, json_safe, format_cell, FORMATS

__all__ = [
    'parse_k_spec',
    'parse_config_file',
    'OutputFormatter',
    'json_safe',
    'format_cell',
    'FORMATS',
]
