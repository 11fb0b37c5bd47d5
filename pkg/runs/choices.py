RUN_STATUS_CHOICES = [
    ("pending", "Pending"),
    ("passed", "Passed"),
    ("failed", "Failed"),
    ("error", "Error"),
]

PROVENANCE_CHOICES = [
    ("derived", "Derived"),
    ("trivial", "Trivial"),
    ("cited", "Cited"),
]

COMMAND_CHOICES = [
    ("chars", "Characters"),
    ("afe_check", "AFE check"),
    ("fe_check", "Functional equation check"),
    ("moment", "Twisted fourth moment"),
    ("verify_euler", "Euler product identities"),
    ("verify_voronoi", "Voronoi summation"),
    ("cyclotomic", "Cyclotomic scan"),
    ("det_scan", "Determinant scan"),
    ("mollifier", "Mollifier parameters"),
    ("holder_demo", "Hölder demonstration"),
    ("suite", "Acceptance suite"),
]
