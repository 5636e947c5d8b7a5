from django.utils.translation import gettext as _

from khovanskii import linalg
from khovanskii.km import STRATEGIES, TABLE, ambient_macaulay_shape, km_matrix
from khovanskii.systemfile import write_km_csv

from ._base import KhovanskiiCommand


class Command(KhovanskiiCommand):
    help = _("Builds the Khovanskii-Macaulay matrix in degree d and prints its shape or exports it as CSV.")

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('-d', '--degree', type=int, required=True)
        parser.add_argument('--reduce', action='store_true', help=_("keep a maximal independent set of rows"))
        parser.add_argument('--strategy', choices=STRATEGIES, default=TABLE)
        parser.add_argument('--out', choices=('text', 'csv'), default='text')

    def handle(self, *args, **options):
        form, system = self.load(options['file'])
        matrix = km_matrix(system, options['degree'], reduce=options['reduce'], strategy=options['strategy'])
        if options['out'] == 'csv':
            write_km_csv(system, matrix, self.stdout)
            return
        rows, cols = matrix.shape
        rank = linalg.rank(matrix.entries, cols, matrix.field)
        self.stdout.write(f"shape: {rows} x {cols}")
        self.stdout.write(f"rank: {rank}")
        self.stdout.write(f"nullity: {cols - rank}")
        if system.equations:
            ambient = ambient_macaulay_shape(system.degrees, matrix.degree, system.par.n)
            self.stdout.write(f"dense Macaulay shape on P^{system.par.n}: {ambient[0]} x {ambient[1]}")
