from django.contrib import admin
from .models import DecompositionRun, BenchmarkRun


@admin.register(DecompositionRun)
class DecompositionRunAdmin(admin.ModelAdmin):
    list_display = ('label', 'source', 'series_length', 'retained_periods', 'boxcox_lambda', 'success', 'started_at', 'duration_seconds')
    list_filter = ('source', 'success', 'started_at')
    search_fields = ('label', 'message')
    readonly_fields = ('started_at', 'completed_at', 'duration_seconds')

    fieldsets = (
        ('Series', {
            'fields': ('source', 'label', 'series_length', 'periods', 'retained_periods')
        }),
        ('Parameters', {
            'fields': ('params', 'boxcox_lambda'),
            'classes': ('collapse',)
        }),
        ('Outcome', {
            'fields': ('success', 'message')
        }),
        ('Timing', {
            'fields': ('started_at', 'completed_at', 'duration_seconds')
        })
    )


@admin.register(BenchmarkRun)
class BenchmarkRunAdmin(admin.ModelAdmin):
    list_display = ('corpus_path', 'series_count', 'get_scored_count', 'failed_count', 'threads', 'total_seconds', 'created_at')
    list_filter = ('threads', 'created_at')
    search_fields = ('corpus_path',)
    readonly_fields = ('created_at',)

    def get_scored_count(self, obj):
        return obj.scored_count()
    get_scored_count.short_description = 'Scored'
