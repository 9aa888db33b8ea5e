"""Running suites programmatically

The same runner backs the command line:  python3 -m wittkit --suite theorem1
"""

import json
import tempfile

from wittkit.harness import RunConfig, run_suite

with tempfile.TemporaryDirectory() as cache:
    report = run_suite(RunConfig(suite="lemma-identities", n=2, cache_dir=cache))
    print(report.summary())
    doc = json.loads(report.to_json(timings=False))
    print("schema:", doc["schema"], " pass:", doc["pass"])
