from core.settings.base import LogSettings, Settings


class ProductionSettings(Settings):
    LOG: LogSettings = LogSettings(SERIALIZE=True, ENQUEUE=True)
