from django.core.management.base import CommandError
from django.utils.translation import gettext as _

from khovanskii.hilbert import hilbert_numerator

from ._base import KhovanskiiCommand


class Command(KhovanskiiCommand):
    help = _("Prints the Hilbert function, numerator, regularity index and degree of the variety.")

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--dmax', type=int, required=True)

    def handle(self, *args, **options):
        form, system = self.load(options['file'])
        try:
            data = hilbert_numerator(system.par, options['dmax'])
        except ValueError as error:
            raise CommandError(str(error), returncode=1)
        self.stdout.write("HF: " + ", ".join(str(v) for v in data.hf))
        self.stdout.write("numerator: " + ", ".join(str(v) for v in data.numerator))
        self.stdout.write(f"HReg: {data.hreg}")
        self.stdout.write(f"degree: {data.degree}")
        self.stdout.write(f"certified: {'yes' if data.certified else 'no'}")
        for warning in data.warnings:
            self.stderr.write(warning)
