"""Key-value configuration files.

Format: one `key = value` pair per line, `#` starts a comment, blank lines
ignored.  Keys are dotted; the key set is closed except for the two dynamic
families `concept.<label>` (sample index lists defining which training
samples seed which concept) and `ged.attr_weight.<attribute>` (per-attribute
substitution weights).  Values are numbers, or comma-separated lists where
a list is expected.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .concept import ReductionSettings
from .errors import ConfigError
from .ged import CostConfig, DEFAULT_ATTR_WEIGHTS

DEFAULTS: dict[str, float | int | str] = {
    "budget_ms": 2000,
    "vectorize.threshold": 0.5,
    "vectorize.corner_angle": 45.0,
    "reduction.endpoint_sim_threshold": 0.5,
    "reduction.w_pos": 0.7,
    "reduction.w_attr": 0.3,
    "reduction.ip_merge_dist": 0.15,
    "reduction.max_simple_paths": 64,
    "ged.node_insert_cost": 1.0,
    "ged.node_delete_cost": 1.0,
    "ged.edge_insert_cost": 0.1,
    "ged.edge_delete_cost": 0.1,
    "ged.default_attr_weight": 1.0,
    "ged.presence_penalty": 0.25,
    "ged.infinity": 1e9,
    "augment.count": 10,
    "augment.seed": 7,
    "augment.rotation": 10.0,
    "augment.shift": 2.0,
    "augment.scale": 0.1,
    "classes": "1,2,3,6,7,9",
}


@dataclass
class Config:
    values: dict[str, object] = field(default_factory=dict)

    def get(self, key: str):
        if key in self.values:
            return self.values[key]
        if key in DEFAULTS:
            return DEFAULTS[key]
        raise ConfigError(f"unknown config key: {key}")

    def get_float(self, key: str) -> float:
        return float(self.get(key))

    def get_int(self, key: str) -> int:
        return int(float(self.get(key)))

    # -- derived sections --

    def budget_seconds(self) -> float:
        return self.get_int("budget_ms") / 1000.0

    def reduction_settings(self) -> ReductionSettings:
        return ReductionSettings(
            endpoint_sim_threshold=self.get_float("reduction.endpoint_sim_threshold"),
            w_pos=self.get_float("reduction.w_pos"),
            w_attr=self.get_float("reduction.w_attr"),
            ip_merge_dist=self.get_float("reduction.ip_merge_dist"),
            max_simple_paths=self.get_int("reduction.max_simple_paths"),
        )

    def cost_config(self) -> CostConfig:
        weights = dict(DEFAULT_ATTR_WEIGHTS)
        for key, value in self.values.items():
            if key.startswith("ged.attr_weight."):
                weights[key[len("ged.attr_weight."):]] = float(value)
        return CostConfig(
            node_insert_cost=self.get_float("ged.node_insert_cost"),
            node_delete_cost=self.get_float("ged.node_delete_cost"),
            edge_insert_cost=self.get_float("ged.edge_insert_cost"),
            edge_delete_cost=self.get_float("ged.edge_delete_cost"),
            attr_weight=weights,
            default_attr_weight=self.get_float("ged.default_attr_weight"),
            presence_penalty=self.get_float("ged.presence_penalty"),
            infinity=self.get_float("ged.infinity"),
        )

    def classes(self) -> list[str]:
        raw = str(self.get("classes"))
        return [c.strip() for c in raw.split(",") if c.strip()]

    def concept_groups(self) -> dict[str, list[int]]:
        """concept.<label> keys: which per-class sample indices seed each concept."""
        groups: dict[str, list[int]] = {}
        for key, value in self.values.items():
            if key.startswith("concept."):
                label = key[len("concept."):]
                try:
                    groups[label] = [int(tok) for tok in str(value).split(",") if tok.strip()]
                except ValueError as exc:
                    raise ConfigError(f"bad index list for {key}: {value!r}") from exc
        return groups


def _known_key(key: str) -> bool:
    return (
        key in DEFAULTS
        or key.startswith("concept.")
        or key.startswith("ged.attr_weight.")
    )


def parse_config(text: str) -> Config:
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not _known_key(key):
            raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        values[key] = value
    return Config(values)


def load_config(path: str | None) -> Config:
    if path is None:
        return Config()
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
