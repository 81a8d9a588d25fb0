from .base import PipelineExecutor
from .local import LocalPipelineExecutor
