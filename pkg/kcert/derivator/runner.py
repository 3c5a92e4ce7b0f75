"""
Turns a validated run configuration into checks, runs them and merges the
certificates.
"""
import logging
from concurrent.futures import ThreadPoolExecutor

from django.conf import settings

from . import scat
from .certificates import Certificate, Status, sort_certificates
from .exceptions import KcertError
from .ringlin import RingKind, make_ring

logger = logging.getLogger(__name__)


def _field(p):
    return make_ring(RingKind.FIELD, p)


def tasks_for(subcommand, config):
    """(label, thunk) pairs; every thunk returns one Certificate."""
    p, level, cap = config['p'], config['level'], config['cap']
    rings = [make_ring(kind, p) for kind in config['ring_kinds']]
    if subcommand == 'check-simplicial':
        return [('check-simplicial', lambda: scat.check_simplicial(_field(p), level))]
    if subcommand == 'hom-table':
        return [('hom-table', lambda: scat.hom_table_check(_field(p), level))]
    if subcommand == 'ext-table':
        return [('ext-table', lambda: scat.ext_table_check(_field(p), level))]
    if subcommand == 'b-family':
        return [('b-family', lambda: scat.b_family_check(_field(p), level))]
    if subcommand == 'decompose':
        count, seed = config['count'], config['seed']
        return [('decompose', lambda: scat.decompose_roundtrip(_field(p), level, count, seed))]
    if subcommand == 'independence':
        return [('independence', lambda: scat.independence_check(p, level, cap))]
    checks = {
        'verify-iso1': lambda ring: scat.verify_iso1(ring, level),
        'verify-iso2': lambda ring: scat.verify_iso2(ring, level),
        'k0': lambda ring: scat.k0_check(ring, cap),
        'remark': lambda ring: scat.verify_remark(ring),
    }
    if subcommand in checks:
        check = checks[subcommand]
        return [(f'{subcommand} {ring}', (lambda ring=ring: check(ring))) for ring in rings]
    raise KcertError(f'unknown subcommand {subcommand}')


def all_tasks(config):
    kcert = settings.KCERT
    defaults = {
        'check-simplicial': kcert['DEFAULT_SIMPLICIAL_LEVEL'],
        'hom-table': kcert['DEFAULT_TABLE_LEVEL'],
        'ext-table': kcert['DEFAULT_TABLE_LEVEL'],
        'verify-iso1': kcert['DEFAULT_ISO_LEVEL'],
        'verify-iso2': kcert['DEFAULT_ISO_LEVEL'],
        'independence': kcert['DEFAULT_ISO_LEVEL'],
        'k0': None,
        'remark': None,
        'b-family': kcert['DEFAULT_SIMPLICIAL_LEVEL'],
        'decompose': kcert['DEFAULT_DECOMPOSE_LEVEL'],
    }
    tasks = []
    for subcommand, level in defaults.items():
        tasks.extend(tasks_for(subcommand, dict(config, level=level)))
    return tasks


def _guarded(label, thunk):
    try:
        return thunk()
    except KcertError as exc:
        logger.error('%s raised %s', label, exc)
        return Certificate(check=label.split(' ')[0], status=Status.FAIL, witnesses=[str(exc)])


def _isolated(label, thunk):
    try:
        return _guarded(label, thunk)
    finally:
        scat.clear_caches()


def execute(tasks, parallel=1):
    if parallel > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=parallel) as pool:
            certificates = list(pool.map(lambda task: _guarded(*task), tasks))
        scat.clear_caches()
    else:
        certificates = [_isolated(label, thunk) for label, thunk in tasks]
    return sort_certificates(certificates)


def run(argv):
    """Run ``kcheck`` in-process and return its exit code."""
    from .management.commands.kcheck import Command

    try:
        Command().run_from_argv(['manage.py', 'kcheck', *argv])
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    return 0
