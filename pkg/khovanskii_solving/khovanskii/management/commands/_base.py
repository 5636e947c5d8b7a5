import json
import logging
import sys
from contextlib import contextmanager

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from django.utils.translation import gettext as _

from khovanskii.exceptions import KhovanskiiError, SystemFileError
from khovanskii.forms import SystemFileForm

VERBOSITY_LEVELS = {0: logging.ERROR, 2: logging.INFO, 3: logging.DEBUG}


class KhovanskiiCommand(BaseCommand):
    """Shared plumbing: SystemFile loading, ``--threads``, verbosity and exit codes."""

    reads_file = True
    stealth_options = ('stdin',)

    def add_arguments(self, parser):
        if self.reads_file:
            parser.add_argument('file', help=_("SystemFile JSON path, or - for standard input"))
        parser.add_argument('--threads', type=int, default=None, help=_("worker threads for table building"))

    def execute(self, *args, **options):
        self.stdin = options.get('stdin') or sys.stdin
        logger = logging.getLogger('khovanskii')
        previous = logger.level
        level = VERBOSITY_LEVELS.get(options.get('verbosity', 1))
        if level is not None:
            logger.setLevel(level)
        try:
            with self.thread_override(options.get('threads')):
                return super().execute(*args, **options)
        except KhovanskiiError as error:
            raise CommandError(str(error), returncode=error.exit_code)
        finally:
            logger.setLevel(previous)

    @contextmanager
    def thread_override(self, threads):
        if not threads:
            yield
            return
        config = getattr(settings, 'KHOVANSKII', {})
        saved = dict(config)
        config['THREADS'] = threads
        try:
            yield
        finally:
            config.clear()
            config.update(saved)

    def read_document(self, path):
        try:
            if path == '-':
                return json.load(self.stdin)
            with open(path, encoding='utf-8') as handle:
                return json.load(handle)
        except OSError as error:
            raise SystemFileError(_("Cannot read %(path)s: %(error)s") % {'path': path, 'error': error})
        except json.JSONDecodeError as error:
            raise SystemFileError(_("Invalid JSON in %(path)s: %(error)s") % {'path': path, 'error': error})

    def load(self, path):
        """Returns the validated form and the system built from it."""
        document = self.read_document(path)
        if not isinstance(document, dict):
            raise SystemFileError(_("A SystemFile must be a JSON object."))
        form = SystemFileForm(data=document)
        if not form.is_valid():
            raise SystemFileError(form.errors.as_text())
        return form, form.to_system()

    def write_json(self, document):
        self.stdout.write(json.dumps(document, indent=2), ending='\n')
