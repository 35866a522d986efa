from core.settings.base import ComputeSettings, LogSettings, Settings


class LocalSettings(Settings):
    LOG: LogSettings = LogSettings(COLORIZE=True)
    # one worker unless --threads or COMPUTE__THREADS asks for more
    COMPUTE: ComputeSettings = ComputeSettings(THREADS=1)
