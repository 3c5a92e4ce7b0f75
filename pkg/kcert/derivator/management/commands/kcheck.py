import logging

from django.core.management.base import BaseCommand, CommandError

from derivator import runner
from derivator.certificates import render, write_certificates
from derivator.forms import FORMAT_CHOICES, RING_CHOICES, SUBCOMMANDS, RunConfigForm

logger = logging.getLogger('derivator')


class Command(BaseCommand):
    help = 'Compute and certify the combinatorial models of the K-theory counterexample.'

    def add_arguments(self, parser):
        parser.add_argument('subcommand', choices=SUBCOMMANDS)
        parser.add_argument('--p', type=int, help='Residue characteristic (a prime).')
        parser.add_argument('--ring', choices=[c for c, _ in RING_CHOICES])
        parser.add_argument('--level', '--max-level', dest='level', type=int)
        parser.add_argument('--cap', type=int, help='Rank cap for K_0 enumeration.')
        parser.add_argument('--format', dest='output_format', choices=[c for c, _ in FORMAT_CHOICES])
        parser.add_argument('--parallel', type=int)
        parser.add_argument('--output', help='Write certificates to this path instead of stdout.')
        parser.add_argument('--count', type=int, help='Random representations for decompose.')
        parser.add_argument('--seed', type=int)

    def handle(self, *args, **options):
        if options['verbosity'] >= 2:
            logger.setLevel(logging.DEBUG)

        data = {name: options.get(name) for name in RunConfigForm.base_fields}
        form = RunConfigForm({k: v for k, v in data.items() if v is not None})
        if not form.is_valid():
            messages = '; '.join(f'{field}: {" ".join(errors)}' for field, errors in form.errors.items())
            raise CommandError(messages, returncode=2)

        config = dict(form.cleaned_data, ring_kinds=form.ring_kinds())
        if config['subcommand'] == 'all':
            tasks = runner.all_tasks(config)
        else:
            tasks = runner.tasks_for(config['subcommand'], config)
        logger.info('Running %d check(s) for %s', len(tasks), config['subcommand'])
        certificates = runner.execute(tasks, parallel=config['parallel'])

        if config['output']:
            write_certificates(certificates, config['output'], config['output_format'])
        else:
            self.stdout.write(render(certificates, config['output_format']), ending='')

        failed = [c for c in certificates if not c.passed]
        if failed:
            for cert in failed:
                for witness in cert.witnesses:
                    self.stderr.write(f'{cert.check} [{cert.ring}]: {witness}')
            raise CommandError(f'{len(failed)} check(s) failed', returncode=1)
