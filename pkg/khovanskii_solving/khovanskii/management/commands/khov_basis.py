from django.core.management.base import CommandError
from django.utils.translation import gettext as _

from khovanskii.khov import graded_basis
from khovanskii.systemfile import monomial_label

from ._base import KhovanskiiCommand


class Command(KhovanskiiCommand):
    help = _("Lists the lattice points of d*A with their witness products of generators.")

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('-d', '--degree', type=int, required=True)

    def handle(self, *args, **options):
        form, system = self.load(options['file'])
        if options['degree'] < 0:
            raise CommandError(_("The degree must be non-negative."), returncode=1)
        basis = graded_basis(system.par, options['degree'])
        support = basis.support
        for beta, element in zip(support.points, basis.elements):
            self.stdout.write(f"{list(beta)}\t{monomial_label(support.monomials[beta])}\t{element.to_text()}")
        self.stdout.write(_("%(count)d points in degree %(d)d") % {'count': len(support), 'd': support.degree})
