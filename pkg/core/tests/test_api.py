import numpy as np
from django.contrib.auth.models import User
from django.test import TestCase
from rest_framework import status
from rest_framework.test import APIClient

from core.models import DecompositionRun
from core.run_tracker import RunTracker


class ApiTests(TestCase):
    def setUp(self):
        self.user = User.objects.create_user(username='analyst', password='secret-pass-123')
        self.client = APIClient()
        self.client.force_authenticate(user=self.user)
        t = np.arange(1, 61)
        self.values = list(10.0 + 0.05 * t + np.sin(2 * np.pi * t / 12))

    def test_health(self):
        response = APIClient().get('/api/health/')
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.json(), {'status': 'healthy'})

    def test_decompose(self):
        values = list(self.values)
        values[5] = None
        response = self.client.post('/api/decompose/', {'values': values, 'periods': [12]}, format='json')
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        body = response.json()
        self.assertTrue(body['success'])
        d = body['decomposition']
        self.assertEqual(d['retained_periods'], [12])
        self.assertEqual(len(d['seasonals']['12']), 60)
        rebuilt = np.array(d['trend']) + np.array(d['seasonals']['12']) + np.array(d['remainder'])
        np.testing.assert_allclose(rebuilt, d['data'], atol=1e-9)

        run = DecompositionRun.objects.get()
        self.assertEqual(run.source, 'api')
        self.assertEqual(run.series_length, 60)

    def test_decompose_validation(self):
        response = self.client.post('/api/decompose/', {'periods': [12]}, format='json')
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        response = self.client.post('/api/decompose/', {'values': self.values, 'lambda': 3}, format='json')
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertFalse(response.json()['success'])
        response = self.client.post('/api/decompose/', {'values': self.values, 'periods': [2.5]}, format='json')
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)

    def test_requires_authentication(self):
        response = APIClient().post('/api/decompose/', {'values': self.values}, format='json')
        self.assertIn(response.status_code, (status.HTTP_401_UNAUTHORIZED, status.HTTP_403_FORBIDDEN))

    def test_simulate(self):
        response = self.client.post(
            '/api/simulate/', {'dgp': 'stochastic', 'sigma2': 0.025, 'frequency': 'hourly', 'seed': 4}, format='json'
        )
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        body = response.json()
        self.assertEqual(body['periods'], [24, 168])
        self.assertEqual(len(body['composite']), 505)

    def test_simulate_validation(self):
        response = self.client.post('/api/simulate/', {'dgp': 'chaotic'}, format='json')
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)

    def test_run_list(self):
        self.client.post('/api/decompose/', {'values': self.values, 'periods': [12]}, format='json')
        response = self.client.get('/api/runs/', {'limit': 5})
        body = response.json()
        self.assertEqual(body['count'], 1)
        self.assertEqual(body['runs'][0]['source'], 'api')
        self.assertEqual(self.client.get('/api/runs/', {'limit': 'many'}).status_code, 400)


class RunTrackerTests(TestCase):
    def record(self, tracker, label):
        return tracker.record_decomposition(
            source='cli', label=label, series_length=60, periods=[12], params={},
            result={'success': True, 'message': 'ok'}, duration_seconds=0.01,
        )

    def test_recent_decompositions_is_limited(self):
        tracker = RunTracker(enabled=True)
        for index in range(4):
            self.record(tracker, f"run-{index}")
        recent = list(tracker.recent_decompositions(3))
        self.assertEqual(len(recent), 3)
        self.assertTrue({run.label for run in recent} <= {f"run-{index}" for index in range(4)})

    def test_disabled_tracker_records_nothing(self):
        self.assertIsNone(self.record(RunTracker(enabled=False), 'quiet'))
        self.assertEqual(DecompositionRun.objects.count(), 0)
