from django.db import models


class DecompositionRun(models.Model):
    """Audit trail of decompositions run through the commands and the API"""

    SOURCES = [
        ('cli', 'Command Line'),
        ('api', 'HTTP API'),
        ('bench', 'Benchmark'),
    ]

    # What was decomposed
    source = models.CharField(max_length=10, choices=SOURCES, default='cli')
    label = models.CharField(max_length=500, blank=True)  # Input path or request label
    series_length = models.IntegerField(default=0)
    periods = models.JSONField(default=list, blank=True)  # Periods as declared
    retained_periods = models.JSONField(default=list, blank=True)  # Periods actually fitted

    # How
    params = models.JSONField(default=dict, blank=True)
    boxcox_lambda = models.FloatField(null=True, blank=True)

    # Outcome
    success = models.BooleanField(default=False)
    message = models.TextField(blank=True)

    # Timing
    started_at = models.DateTimeField(auto_now_add=True)
    completed_at = models.DateTimeField(null=True, blank=True)
    duration_seconds = models.FloatField(null=True, blank=True)

    class Meta:
        ordering = ['-started_at']
        indexes = [
            models.Index(fields=['source', 'success'], name='decomp_source_success_idx'),
            models.Index(fields=['-started_at'], name='decomp_started_idx'),
        ]

    def __str__(self):
        status = 'ok' if self.success else 'failed'
        return f"{self.get_source_display()}: {self.label or 'series'} (n={self.series_length}, {status})"

    def get_summary(self):
        return {
            'id': self.id,
            'source': self.source,
            'label': self.label,
            'series_length': self.series_length,
            'periods': self.periods,
            'retained_periods': self.retained_periods,
            'lambda': self.boxcox_lambda,
            'success': self.success,
            'message': self.message,
            'started_at': self.started_at.isoformat() if self.started_at else None,
            'duration_seconds': self.duration_seconds,
        }


class BenchmarkRun(models.Model):
    """One scored pass over a corpus manifest"""

    corpus_path = models.CharField(max_length=500)
    series_count = models.IntegerField(default=0)
    failed_count = models.IntegerField(default=0)
    threads = models.IntegerField(default=1)

    aggregate = models.JSONField(default=dict, blank=True)  # Pooled RMSE per component
    report = models.JSONField(default=dict, blank=True)  # Full evaluation report

    total_seconds = models.FloatField(default=0.0)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created_at']

    def __str__(self):
        return f"Benchmark {self.corpus_path} ({self.series_count} series, {self.total_seconds:.2f}s)"

    def scored_count(self):
        return self.series_count - self.failed_count
