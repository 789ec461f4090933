# Generated by Django 4.2.25 on 2026-10-18 09:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='BenchmarkRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('corpus_path', models.CharField(max_length=500)),
                ('series_count', models.IntegerField(default=0)),
                ('failed_count', models.IntegerField(default=0)),
                ('threads', models.IntegerField(default=1)),
                ('aggregate', models.JSONField(blank=True, default=dict)),
                ('report', models.JSONField(blank=True, default=dict)),
                ('total_seconds', models.FloatField(default=0.0)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created_at'],
            },
        ),
        migrations.CreateModel(
            name='DecompositionRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('source', models.CharField(choices=[('cli', 'Command Line'), ('api', 'HTTP API'), ('bench', 'Benchmark')], default='cli', max_length=10)),
                ('label', models.CharField(blank=True, max_length=500)),
                ('series_length', models.IntegerField(default=0)),
                ('periods', models.JSONField(blank=True, default=list)),
                ('retained_periods', models.JSONField(blank=True, default=list)),
                ('params', models.JSONField(blank=True, default=dict)),
                ('boxcox_lambda', models.FloatField(blank=True, null=True)),
                ('success', models.BooleanField(default=False)),
                ('message', models.TextField(blank=True)),
                ('started_at', models.DateTimeField(auto_now_add=True)),
                ('completed_at', models.DateTimeField(blank=True, null=True)),
                ('duration_seconds', models.FloatField(blank=True, null=True)),
            ],
            options={
                'ordering': ['-started_at'],
                'indexes': [models.Index(fields=['source', 'success'], name='decomp_source_success_idx'), models.Index(fields=['-started_at'], name='decomp_started_idx')],
            },
        ),
    ]
