from abc import ABC, abstractmethod

class ITrainingCallback(ABC):
    @abstractmethod
    def on_checkpoint(self, step: int, trainer) -> None:
        """Called every ``checkpoint_every`` optimizer steps and once at the end"""
        pass
