import logging

from django.db.models.signals import post_save
from django.dispatch import receiver

from runs.models import Record, Run

logger = logging.getLogger(__name__)


@receiver(post_save, sender=Record)
def handle_record_post_save(sender, instance, created, **kwargs):
    if instance.passed:
        return
    updated = Run.objects.filter(pk=instance.run_id).exclude(status="failed").update(status="failed")
    if updated:
        logger.warning("Run %s failed at %s #%d (%s).", instance.run_id, instance.kind, instance.index, instance.anchor)
