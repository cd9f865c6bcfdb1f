# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0+

import logging

logger = logging.getLogger(__name__)


class BenchEvent:
    name = 'bench'

    def __init__(self, content, case_id):
        self.content = content
        self.case_id = case_id

    def marshal(self):
        return {'name': self.name, 'case': self.case_id, 'data': dict(self.content)}


class CaseStartedEvent(BenchEvent):
    name = 'case_started'


class LevelDoneEvent(BenchEvent):
    name = 'level_done'


class CaseDoneEvent(BenchEvent):
    name = 'case_done'
