# Copyright (C) 2026 The apicompat Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python access to the apicompat core.

Records are dicts with the keys signature, level, body, annotations,
comment, throws, file, line and public.
"""

import json

from . import _core
from ._core import Error, __version__

__all__ = [
    "Error",
    "accuracy_success_rate",
    "build_prompt",
    "check_app",
    "classify_change",
    "compute_prf",
    "detect_baseline",
    "diff_levels",
    "extract_records",
    "krippendorff_alpha",
    "parse_model_output",
    "run_cli",
    "scan_corpus",
    "to_ast_text",
]


def extract_records(source, level, path="<memory>"):
    return json.loads(_core.extract_records(source, level, path))


def scan_corpus(root, lo=4, hi=33, public_only=False, jobs=1):
    """Returns {level: [record, ...]} for the level directories under root."""
    facts = json.loads(_core.scan_corpus(str(root), lo, hi, public_only, jobs))
    return {int(level): records for level, records in facts.items()}


def diff_levels(old_records, new_records):
    return json.loads(_core.diff_levels(json.dumps(old_records), json.dumps(new_records)))


def classify_change(old_record, new_record):
    return json.loads(_core.classify_change(json.dumps(old_record), json.dumps(new_record)))


def to_ast_text(body):
    return _core.to_ast_text(body)


def build_prompt(old_record, new_record, include_comments=False, include_ast=False,
                 use_cot=True, shots=3):
    return _core.build_prompt(json.dumps(old_record), json.dumps(new_record),
                              include_comments, include_ast, use_cot, shots)


def parse_model_output(text, require_change_types=True):
    return json.loads(_core.parse_model_output(text, require_change_types))


def detect_baseline(old_record, new_record):
    return json.loads(_core.detect_baseline(json.dumps(old_record), json.dumps(new_record)))


def compute_prf(predictions, golds, universe):
    return json.loads(_core.compute_prf([list(p) for p in predictions],
                                        [list(g) for g in golds], list(universe)))


def accuracy_success_rate(predictions, golds):
    return _core.accuracy_success_rate([list(p) for p in predictions], [list(g) for g in golds])


def krippendorff_alpha(annotations, distance="jaccard"):
    """annotations[item][annotator] is a label collection or None."""
    rows = [[None if v is None else list(v) for v in item] for item in annotations]
    return _core.krippendorff_alpha(rows, distance)


def check_app(app, kb_dir, assume_sdk_range="", allow_missing_manifest=False):
    text = _core.check_app(str(app), str(kb_dir), assume_sdk_range, allow_missing_manifest)
    return [json.loads(line) for line in text.splitlines() if line]


def run_cli(*args):
    """Runs the command line in-process; returns (exit code, stdout, stderr)."""
    return _core.run_cli([str(a) for a in args])
