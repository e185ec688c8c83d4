import os
import json
from typing import Any, List, Optional, Union


class SettingsManager:

    settings: dict = {}  # contains all the settings data, grouped by section
    _built_in_settings: List[str] = ["default", "strict"]
    _currently_loaded_settings: Union[str, None] = None

    thread_environment_variable = "CURVEXFER_THREADS"

    @classmethod
    def load_settings(cls, settings_name_or_path: str):
        script_directory = os.path.dirname(os.path.abspath(__file__))

        if settings_name_or_path in cls._built_in_settings:
            with open(os.path.join(script_directory, "..", "assets", "settings", f"{settings_name_or_path}.json"), "r") as f:
                loaded = json.load(f)
        else:
            with open(settings_name_or_path, "r") as f:
                loaded = json.load(f)

        # user files may leave out sections, those fall back to the defaults
        if settings_name_or_path != "default":
            with open(os.path.join(script_directory, "..", "assets", "settings", "default.json"), "r") as f:
                merged = json.load(f)
            for section, values in loaded.items():
                merged.setdefault(section, {}).update(values)
            loaded = merged

        cls.settings = loaded

        # store settings path for saving
        cls._currently_loaded_settings = settings_name_or_path

    @classmethod
    def save_settings(cls):
        if cls._currently_loaded_settings is not None:
            if cls._currently_loaded_settings not in cls._built_in_settings:
                with open(cls._currently_loaded_settings, "w") as f:
                    json.dump(cls.settings, f, indent=2)
            else:
                raise ValueError(f"cannot modify builtin settings '{cls._currently_loaded_settings}'")
        else:
            raise ValueError(f"cannot save settings, no settings are loaded")

    @classmethod
    def get(cls, section: str, key: str) -> Any:
        try:
            values = cls.settings[section]
        except KeyError:
            raise KeyError(f"settings have no section '{section}'") from None
        try:
            return values[key]
        except KeyError:
            raise KeyError(f"settings section '{section}' has no key '{key}'") from None

    @classmethod
    def set(cls, section: str, key: str, value: Any):
        """ overwrite a single value of the loaded settings (not persisted until save_settings) """
        cls.settings.setdefault(section, {})[key] = value

    @classmethod
    def worker_count(cls, requested: Optional[int] = None) -> int:
        """ number of worker threads: explicit request, then CURVEXFER_THREADS, then settings, else 1 """
        if requested is not None:
            return max(int(requested), 1)

        from_environment = os.environ.get(cls.thread_environment_variable)
        if from_environment:
            try:
                return max(int(from_environment), 1)
            except ValueError:
                raise ValueError(f"{cls.thread_environment_variable} must be an integer, not '{from_environment}'") from None

        configured = cls.settings.get("transfer", {}).get("threads")
        if configured is not None:
            return max(int(configured), 1)
        return 1
