from abc import ABC, abstractmethod
from typing import List

from src.data.schema import Meeting

class ISummarizer(ABC):
    @abstractmethod
    def summarize(self, meeting: Meeting) -> List[str]:
        """
        Produce a summary for one meeting

        Args:
            meeting: The meeting transcript (its reference summary is only
                read by oracle systems)

        Returns:
            Summary tokens
        """
        pass

    @abstractmethod
    def get_name(self) -> str:
        """Get system identifier used in reports"""
        pass
