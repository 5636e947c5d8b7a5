# Generated by Django 4.2 on 2026-10-18 09:00

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='SolveRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('label', models.CharField(blank=True, max_length=200, verbose_name='label')),
                ('field', models.CharField(max_length=40, verbose_name='field')),
                ('seed', models.BigIntegerField(default=1, verbose_name='seed')),
                ('dreg', models.PositiveIntegerField(blank=True, null=True, verbose_name='regularity degree')),
                ('delta', models.PositiveIntegerField(blank=True, null=True, verbose_name='number of solutions')),
                ('status', models.CharField(choices=[('ok', 'solved'), ('failed', 'failed')], default='ok', max_length=10, verbose_name='status')),
                ('system', models.JSONField(verbose_name='system file')),
                ('result', models.JSONField(blank=True, null=True, verbose_name='result')),
                ('message', models.TextField(blank=True, verbose_name='message')),
                ('created_at', models.DateTimeField(auto_now_add=True, verbose_name='created at')),
            ],
            options={
                'verbose_name': 'solve run',
                'verbose_name_plural': 'solve runs',
                'ordering': ['-created_at'],
            },
        ),
    ]
