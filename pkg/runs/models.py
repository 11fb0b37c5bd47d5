from django.db import models
from django.utils import timezone

from runs.choices import COMMAND_CHOICES, PROVENANCE_CHOICES, RUN_STATUS_CHOICES


class Run(models.Model):
    command = models.CharField(max_length=20, choices=COMMAND_CHOICES)
    parameters = models.JSONField(default=dict, help_text="Resolved parameters echoed into the report")
    seed = models.BigIntegerField()
    workers = models.PositiveIntegerField(default=1)
    status = models.CharField(max_length=10, choices=RUN_STATUS_CHOICES, default="pending")
    schema_version = models.PositiveIntegerField(default=1)
    output_path = models.CharField(max_length=500, blank=True)
    created_at = models.DateTimeField(auto_now_add=True)
    finished_at = models.DateTimeField(null=True, blank=True)

    class Meta:
        ordering = ["-created_at", "-id"]

    def __str__(self):
        return f"Run {self.pk}: {self.command} ({self.status})"

    def add_record(self, kind, anchor, provenance_tag, payload, residual=None, passed=True):
        return Record.objects.create(
            run=self,
            index=self.records.count(),
            kind=kind,
            anchor=anchor,
            provenance_tag=provenance_tag,
            payload=payload,
            residual=residual,
            passed=passed,
        )

    def failed_records(self):
        return self.records.filter(passed=False)

    def finish(self, status=None):
        # the signal may already have marked the run failed
        self.refresh_from_db(fields=["status"])
        if status is not None:
            self.status = status
        elif self.status == "pending":
            self.status = "passed"
        self.finished_at = timezone.now()
        self.save(update_fields=["status", "finished_at", "output_path"])


class Record(models.Model):
    run = models.ForeignKey(Run, on_delete=models.CASCADE, related_name="records")
    index = models.PositiveIntegerField()
    kind = models.CharField(max_length=40)
    anchor = models.CharField(max_length=60, help_text="Statement the record checks, e.g. lemma:identity")
    provenance_tag = models.CharField(max_length=10, choices=PROVENANCE_CHOICES)
    payload = models.JSONField(default=dict)
    residual = models.FloatField(null=True, blank=True)
    passed = models.BooleanField(default=True)

    class Meta:
        ordering = ["run", "index"]
        constraints = [models.UniqueConstraint(fields=["run", "index"], name="unique_record_index")]

    def __str__(self):
        return f"{self.kind} #{self.index} ({'passed' if self.passed else 'failed'})"

    def as_report_entry(self):
        return {
            "index": self.index,
            "kind": self.kind,
            "anchor": self.anchor,
            "provenance_tag": self.provenance_tag,
            "residual": self.residual,
            "passed": self.passed,
            "payload": self.payload,
        }
