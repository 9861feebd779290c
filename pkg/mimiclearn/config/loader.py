"""Config file loader: YAML/JSON documents layered over pydantic defaults."""

import json
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Type, TypeVar, Union

import yaml
from pydantic import BaseModel, ValidationError

ModelT = TypeVar("ModelT", bound=BaseModel)


class ConfigLoader:
    """Loads and validates configuration documents."""

    @staticmethod
    def load(config_path: Union[str, Path]) -> Dict[str, Any]:
        """Load a configuration mapping from a YAML or JSON file.

        Args:
            config_path: Path to the config file

        Returns:
            Parsed mapping

        Raises:
            ValueError: If the file cannot be read or is not a mapping
            FileNotFoundError: If the file doesn't exist
        """
        path = Path(config_path)

        if not path.exists():
            raise FileNotFoundError(f"Config file not found: {path}")

        try:
            content = path.read_text(encoding="utf-8")
        except Exception as e:
            raise ValueError(f"Failed to read config file: {e}")

        # Parse based on file extension
        try:
            if path.suffix.lower() in [".yaml", ".yml"]:
                data = yaml.safe_load(content)
            elif path.suffix.lower() == ".json":
                data = json.loads(content)
            else:
                # Try YAML first, then JSON
                try:
                    data = yaml.safe_load(content)
                except yaml.YAMLError:
                    data = json.loads(content)
        except Exception as e:
            raise ValueError(f"Failed to parse config file: {e}")

        if data is None:
            return {}
        if not isinstance(data, dict):
            raise ValueError("Config file must contain a mapping")
        return data

    @staticmethod
    def resolve(
        model_cls: Type[ModelT],
        config_path: Optional[Union[str, Path]] = None,
        overrides: Optional[Mapping[str, Any]] = None,
    ) -> ModelT:
        """Resolve defaults <- file <- flag overrides into a validated model.

        Overrides whose value is None are treated as "flag not given". A
        mapping override (e.g. ``{"train": {"epochs": 5}}``) is merged into
        the section from the file instead of replacing it.

        Raises:
            ValueError: If validation fails; the message names the field
        """
        data: Dict[str, Any] = {}
        if config_path is not None:
            data.update(ConfigLoader.load(config_path))
        for key, value in (overrides or {}).items():
            if isinstance(value, Mapping):
                given = {k: v for k, v in value.items() if v is not None}
                if not given:
                    continue
                section = data.get(key)
                data[key] = {**section, **given} if isinstance(section, dict) else given
            elif value is not None:
                data[key] = value

        try:
            return model_cls.model_validate(data)
        except ValidationError as e:
            raise ValueError(ConfigLoader.describe_error(e)) from e

    @staticmethod
    def describe_error(error: ValidationError) -> str:
        """Render the first validation problem as ``field: message``."""
        first = error.errors()[0]
        field = ".".join(str(part) for part in first.get("loc", ())) or "<root>"
        return f"{field}: {first.get('msg', 'invalid value')}"
