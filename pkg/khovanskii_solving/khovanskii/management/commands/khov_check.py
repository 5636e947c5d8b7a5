from django.core.management.base import CommandError
from django.utils.translation import gettext as _

from khovanskii.khov import check_khovanskii_truncated

from ._base import KhovanskiiCommand


class Command(KhovanskiiCommand):
    help = _("Checks degree by degree that the generators form a Khovanskii basis up to --dmax "
             "(default: one past the file's dreg).")

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--dmax', type=int, default=None)

    def handle(self, *args, **options):
        form, system = self.load(options['file'])
        dmax = options['dmax']
        if dmax is None:
            dreg = form.cleaned_data.get('dreg')
            if not dreg:
                raise CommandError(_("Pass --dmax or give the file a dreg"), returncode=1)
            dmax = dreg + 1
        report = check_khovanskii_truncated(system.par, dmax)
        for check in report.checks:
            verdict = _("pass") if check.passed else _("FAIL")
            self.stdout.write(f"d={check.degree} |dA|={check.support_size} rank={check.rank} {verdict}")
        if not report.passed:
            raise CommandError(_("Not a Khovanskii basis in degree %(d)d") % {'d': report.failed_degree},
                               returncode=2)
        self.stdout.write(self.style.SUCCESS(_("Khovanskii basis through degree %(d)d") % {'d': dmax}))
