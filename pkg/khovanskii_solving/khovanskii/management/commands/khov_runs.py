from django.utils.translation import gettext as _

from khovanskii.models import SolveRun

from ._base import KhovanskiiCommand


class Command(KhovanskiiCommand):
    help = _("Lists recorded solver runs, newest first.")
    reads_file = False

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--limit', type=int, default=20)
        parser.add_argument('--status', choices=[value for value, _label in SolveRun.STATUS_CHOICES], default=None)

    def handle(self, *args, **options):
        runs = SolveRun.objects.all()
        if options['status']:
            runs = runs.filter(status=options['status'])
        runs = runs[:options['limit']]
        if not runs:
            self.stdout.write(_("No runs recorded."))
            return
        for run in runs:
            self.stdout.write(f"{run.pk}\t{run.created_at:%Y-%m-%d %H:%M:%S}\t{run}")
