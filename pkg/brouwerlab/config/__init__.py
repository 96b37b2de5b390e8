from brouwerlab.config.settings import (
    LabSettings,
    get_settings,
    load_settings,
    set_settings,
)

__all__ = ["LabSettings", "get_settings", "load_settings", "set_settings"]
