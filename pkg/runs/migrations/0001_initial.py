# Generated by Django 5.1 on 2024-06-07 12:00

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='Run',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(choices=[('chars', 'Characters'), ('afe_check', 'AFE check'), ('fe_check', 'Functional equation check'), ('moment', 'Twisted fourth moment'), ('verify_euler', 'Euler product identities'), ('verify_voronoi', 'Voronoi summation'), ('cyclotomic', 'Cyclotomic scan'), ('det_scan', 'Determinant scan'), ('mollifier', 'Mollifier parameters'), ('holder_demo', 'Hölder demonstration'), ('suite', 'Acceptance suite')], max_length=20)),
                ('parameters', models.JSONField(default=dict, help_text='Resolved parameters echoed into the report')),
                ('seed', models.BigIntegerField()),
                ('workers', models.PositiveIntegerField(default=1)),
                ('status', models.CharField(choices=[('pending', 'Pending'), ('passed', 'Passed'), ('failed', 'Failed'), ('error', 'Error')], default='pending', max_length=10)),
                ('schema_version', models.PositiveIntegerField(default=1)),
                ('output_path', models.CharField(blank=True, max_length=500)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('finished_at', models.DateTimeField(blank=True, null=True)),
            ],
            options={
                'ordering': ['-created_at', '-id'],
            },
        ),
        migrations.CreateModel(
            name='Record',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('index', models.PositiveIntegerField()),
                ('kind', models.CharField(max_length=40)),
                ('anchor', models.CharField(help_text='Statement the record checks, e.g. lemma:identity', max_length=60)),
                ('provenance_tag', models.CharField(choices=[('derived', 'Derived'), ('trivial', 'Trivial'), ('cited', 'Cited')], max_length=10)),
                ('payload', models.JSONField(default=dict)),
                ('residual', models.FloatField(blank=True, null=True)),
                ('passed', models.BooleanField(default=True)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='records', to='runs.run')),
            ],
            options={
                'ordering': ['run', 'index'],
                'constraints': [models.UniqueConstraint(fields=('run', 'index'), name='unique_record_index')],
            },
        ),
    ]
