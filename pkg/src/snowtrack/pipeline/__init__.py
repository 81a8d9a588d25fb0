from .base import PipelineStep, TrialPipeline
