"""Certificates: the outcome of one check, with its evidence, tables and witnesses."""
import enum
import json
import logging
from collections import Counter
from dataclasses import dataclass, field

import pandas as pd

logger = logging.getLogger(__name__)

MAX_WITNESSES = 5


class Status(str, enum.Enum):
    PASS = 'pass'
    FAIL = 'fail'
    FLAGGED = 'flagged'


@dataclass
class Certificate:
    check: str
    status: Status
    ring: str = ''
    p: int = 0
    n: int = -1
    cap: int = 0
    tables: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    evidence: list = field(default_factory=list)

    @property
    def passed(self):
        return self.status is not Status.FAIL

    @property
    def sort_key(self):
        return (self.check, self.ring, self.p, self.n, self.cap)

    def to_record(self):
        return {
            'check': self.check,
            'ring': self.ring,
            'p': int(self.p),
            'n': int(self.n),
            'cap': int(self.cap),
            'status': self.status.value,
            'tables': {name: [[int(v) for v in row] for row in rows] for name, rows in self.tables.items()},
            'witnesses': [str(w) for w in self.witnesses],
            'notes': [str(note) for note in self.notes],
            'evidence': [str(line) for line in self.evidence],
        }

    def to_json_line(self):
        return json.dumps(self.to_record(), sort_keys=True)

    def render_table(self):
        header = f'[{self.status.value.upper()}] {self.check}'
        unset = {'ring': '', 'p': 0, 'n': -1, 'cap': 0}
        params = [f'{name}={getattr(self, name)}' for name in unset if getattr(self, name) != unset[name]]
        lines = [header + (' (' + ', '.join(params) + ')' if params else '')]
        for name, rows in self.tables.items():
            lines.append(f'  {name}:')
            frame = pd.DataFrame(rows)
            if frame.empty:
                lines.append('    (empty)')
            else:
                lines.extend('    ' + line for line in frame.to_string(index=False, header=False).splitlines())
        for line in self.evidence:
            lines.append(f'  checked {line}')
        for note in self.notes:
            lines.append(f'  note: {note}')
        for witness in self.witnesses:
            lines.append(f'  witness: {witness}')
        return '\n'.join(lines)


class Evidence:
    """Accumulates machine-checked assertions for one certificate."""

    def __init__(self):
        self.checked = Counter()
        self.failures = []
        self.notes = []
        self.tables = {}

    def expect(self, condition, label, witness=''):
        self.checked[label] += 1
        if not condition:
            if len(self.failures) < MAX_WITNESSES:
                self.failures.append(f'{label}: {witness}' if witness else label)
            logger.warning('check failed: %s %s', label, witness)
        return bool(condition)

    def note(self, text):
        self.notes.append(text)

    def table(self, name, rows):
        self.tables[name] = [[int(v) for v in row] for row in rows]

    @property
    def ok(self):
        return not self.failures

    def certificate(self, check, flagged=False, **params):
        if self.failures:
            status = Status.FAIL
        elif not self.checked:
            status = Status.FAIL
            self.failures.append('no assertion was checked')
        else:
            status = Status.FLAGGED if flagged else Status.PASS
        evidence = [f'{label} x{count}' for label, count in sorted(self.checked.items())]
        cert = Certificate(check=check, status=status, tables=dict(self.tables), witnesses=list(self.failures),
                           notes=list(self.notes), evidence=evidence, **params)
        logger.info('%s %s %s', check, status.value, params)
        return cert


def sort_certificates(certificates):
    return sorted(certificates, key=lambda c: c.sort_key)


def render(certificates, output_format):
    certificates = sort_certificates(certificates)
    if output_format == 'json-lines':
        return ''.join(c.to_json_line() + '\n' for c in certificates)
    return '\n\n'.join(c.render_table() for c in certificates) + '\n'


def write_certificates(certificates, path, output_format):
    text = render(certificates, output_format)
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write(text)
    return text
