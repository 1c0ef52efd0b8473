"""Deterministic naming for generated entities, endpoint paths, and attributes.

Every transform derives ids and names through these helpers so that identical
inputs always produce identical output models and plans.
"""

from __future__ import annotations

import re

_TOKEN_RE = re.compile(r"[A-Z]+(?=[A-Z][a-z0-9])|[A-Z]?[a-z0-9]+|[A-Z]+")

# Suffixes that name a role rather than the domain concept; dropped when a
# class name is turned into an API path segment.
_ROLE_SUFFIXES = ("Service", "Controller")


def tokens(name: str) -> list[str]:
    """Split a camelCase / PascalCase / snake_case / kebab-case name."""
    parts: list[str] = []
    for chunk in re.split(r"[\s_\-.:@/]+", name):
        parts.extend(_TOKEN_RE.findall(chunk))
    return parts


def kebab(name: str) -> str:
    return "-".join(t.lower() for t in tokens(name))


def camel(*names: str) -> str:
    toks = [t for name in names for t in tokens(name)]
    if not toks:
        return ""
    head, *rest = toks
    return head.lower() + "".join(t.capitalize() for t in rest)


def pascal(*names: str) -> str:
    return "".join(t.capitalize() for name in names for t in tokens(name))


def plural(name: str) -> str:
    return name if name.endswith("s") else name + "s"


def singular(name: str) -> str:
    return name[:-1] if name.endswith("s") and not name.endswith("ss") else name


def provider_segment(class_name: str) -> str:
    """Path segment for the class providing an API: role suffix stripped."""
    stripped = class_name
    for suffix in _ROLE_SUFFIXES:
        if stripped.endswith(suffix) and len(stripped) > len(suffix):
            stripped = stripped[: -len(suffix)]
            break
    return kebab(stripped)


def method_segment(method_name: str, provider: str) -> str:
    """Path segment for a method, with the provider's own words elided.

    ``updateInventory`` exposed by the ``inventory`` provider becomes
    ``update``: repeating the provider noun in the path would be noise.
    """
    provider_words = {t.lower() for t in tokens(provider)}
    kept = [t for t in tokens(method_name) if t.lower() not in provider_words]
    return "-".join(t.lower() for t in kept) or kebab(method_name)


def call_endpoint_path(provider_class_name: str, method_name: str) -> str:
    seg = provider_segment(provider_class_name)
    return f"/api/{seg}/{method_segment(method_name, seg)}"


def column_endpoint_path(table_name: str, key_column: str, column: str) -> str:
    return f"/api/{kebab(table_name)}/{{{camel(key_column)}}}/{kebab(column)}"


def row_endpoint_path(table_name: str, key_column: str) -> str:
    return f"/api/{kebab(table_name)}/{{{camel(key_column)}}}"


def reference_attribute(referenced_name: str, key_column: str) -> str:
    """Code-level attribute standing in for a removed foreign key."""
    return camel(referenced_name, key_column)


def dto_field_for_id(class_name: str) -> str:
    return camel(class_name, "id")


def dto_field_for_reference(class_name: str) -> str:
    return camel(plural(class_name))


# --- generated-entity ids ----------------------------------------------------
# Convention: "gen:<kind>:<seed>"; a "@<service>" suffix disambiguates entities
# that exist once per consuming service.

def interface_id(class_id: str, service: str) -> str:
    return f"gen:interface:{class_id}@{service}"


def request_client_id(seed: str, service: str) -> str:
    return f"gen:request_client:{seed}@{service}"


def api_endpoint_id(seed: str) -> str:
    return f"gen:api_endpoint:{seed}"


def channel_id(seed: str) -> str:
    return f"gen:channel:{seed}"


def dto_id(class_id: str) -> str:
    return f"gen:dto:{class_id}"


def snapshot_table_id(table_id: str, consumer_service: str) -> str:
    return f"gen:snapshot_table:{table_id}@{consumer_service}"


def data_access_interface_id(table_id: str) -> str:
    return f"gen:data_access_interface:{table_id}"


def library_id(artifact_id: str) -> str:
    return f"gen:library:{artifact_id}"


def proxy_service_id(class_id: str, service: str) -> str:
    return f"gen:proxy_service:{class_id}@{service}"


def new_service_id(artifact_id: str) -> str:
    return f"gen:new_service:{artifact_id}"


def artifact_copy_id(artifact_id: str, service: str) -> str:
    return f"gen:artifact_copy:{artifact_id}@{service}"


def type_replica_id(class_id: str, service: str) -> str:
    return f"gen:type_replica:{class_id}@{service}"


def split_table_id(table_id: str, service: str) -> str:
    return f"gen:table:{table_id}@{service}"


def service_call_edge_id(caller_entity_id: str, via_id: str) -> str:
    return f"svc:{caller_entity_id}->{via_id}"
