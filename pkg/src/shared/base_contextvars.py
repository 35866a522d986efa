from contextvars import ContextVar

# RunManifest of the command currently executing, embedded by the writers
ctx_run_manifest = ContextVar("ctx_run_manifest", default=None)
