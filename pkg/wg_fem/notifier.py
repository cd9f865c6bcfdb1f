# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0+

import logging

from .events import CaseDoneEvent, CaseStartedEvent, LevelDoneEvent

logger = logging.getLogger(__name__)


class BenchNotifier:

    def __init__(self):
        self._subscribers = []

    def subscribe(self, callback):
        self._subscribers.append(callback)

    def publish(self, event):
        for callback in list(self._subscribers):
            try:
                callback(event)
            except Exception as e:
                logger.error(f"Subscriber failed on {event.name} for case {event.case_id}: {e}")

    def publish_case_started(self, case_id, description, levels):
        event = {
            "description": description,
            "levels": levels,
        }
        self.publish(CaseStartedEvent(event, case_id))

    def publish_level(self, case_id, record):
        event = {
            "record": record,
        }
        self.publish(LevelDoneEvent(event, case_id))

    def publish_case_done(self, case_id, report):
        event = {
            "report": report,
            "rates": report.rates(),
        }
        self.publish(CaseDoneEvent(event, case_id))
