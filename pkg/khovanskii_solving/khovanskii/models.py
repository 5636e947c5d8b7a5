from django.db import models
from django.utils.translation import gettext_lazy as _


class SolveRun(models.Model):
    STATUS_CHOICES = (
        ('ok', _('solved')),
        ('failed', _('failed')),
    )

    label = models.CharField(_("label"), max_length = 200, blank=True)
    field = models.CharField(_("field"), max_length = 40)
    seed = models.BigIntegerField(_("seed"), default=1)
    dreg = models.PositiveIntegerField(_("regularity degree"), blank=True, null=True)
    delta = models.PositiveIntegerField(_("number of solutions"), blank=True, null=True)
    status = models.CharField(_('status'), max_length=10, choices=STATUS_CHOICES, default='ok')
    system = models.JSONField(_("system file"))
    result = models.JSONField(_("result"), blank=True, null=True)
    message = models.TextField(_("message"), blank=True)
    created_at = models.DateTimeField(_("created at"), auto_now_add=True)

    def __str__(self) -> str:
        if self.status == 'failed':
            return f"{self.label or 'system'} over {self.field}: failed"
        return f"{self.label or 'system'} over {self.field}: {self.delta} solutions at degree {self.dreg}"

    class Meta:
        ordering = ['-created_at']
        verbose_name = _('solve run')
        verbose_name_plural = _('solve runs')
