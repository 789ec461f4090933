"""
Django management command to create the API account used to call the
decomposition endpoints (idempotent, for container startup)
"""

import logging
import os

from django.contrib.auth.models import User
from django.core.management.base import BaseCommand

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = 'Create the admin account from DJANGO_SUPERUSER_* variables if it does not exist'

    def handle(self, *args, **options):
        username = os.environ.get('DJANGO_SUPERUSER_USERNAME', 'admin')
        email = os.environ.get('DJANGO_SUPERUSER_EMAIL', 'admin@mstlkit.local')
        password = os.environ.get('DJANGO_SUPERUSER_PASSWORD', 'mstlkit123')

        if User.objects.filter(username=username).exists():
            self.stdout.write(self.style.WARNING(f'Superuser "{username}" already exists'))
            return

        User.objects.create_superuser(username=username, email=email, password=password)
        logger.info(f"Created superuser '{username}'")
        self.stdout.write(self.style.SUCCESS(f'Superuser "{username}" created successfully'))
