from core.settings.base import LogSettings, Settings


class StagingSettings(Settings):
    LOG: LogSettings = LogSettings(SERIALIZE=True, ENQUEUE=True)
