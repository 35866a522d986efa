from core.settings.base import LogSettings, Settings


class DevelopmentSettings(Settings):
    LOG: LogSettings = LogSettings(DEBUG=True, COLORIZE=True)
