from django.urls import path
from . import views

urlpatterns = [
    path('api/health/', views.health_check, name='health'),
    path('api/decompose/', views.decompose, name='decompose'),
    path('api/simulate/', views.simulate, name='simulate'),
    path('api/runs/', views.run_list, name='run_list'),
]
