#!/usr/bin/env python3
"""Regenerate the fixture schema documents in canonical form."""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from infowarehouse.schema import parse_schema, serialize_schema, validate_schema

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

PATIENT_CARE = {
    "id": "patient-care",
    "name": "Patient care",
    "version": 1,
    "activities": [
        {"id": "Admit", "name": "Admit", "description": "Register the patient and open the case."},
        {"id": "Examine", "name": "Examine", "description": "Examine the patient and order diagnostic tests."},
        {"id": "Diagnosis", "name": "Diagnosis", "description": "Weigh findings and name the likely disease."},
        {"id": "Plan-Treatment", "name": "Plan treatment", "description": "Lay out the treatment for the diagnosed disease."},
    ],
    "contents": [
        {"id": "Case", "name": "Case", "description": "Top-level description of the patient's case."},
        {"id": "Initial Impression", "name": "Initial impression", "description": "Findings from examining the patient."},
        {"id": "Test Result", "name": "Test result", "description": "Outcome of one diagnostic test."},
        {"id": "Differential Diagnostic", "name": "Differential diagnostic", "description": "Candidate diseases weighed against the findings."},
        {"id": "Treatment Plan", "name": "Treatment plan", "description": "Planned interventions for the diagnosed disease."},
    ],
    "concepts": [
        {"id": "differential-diagnosis", "label": "differential diagnosis",
         "definition": "Distinguishing a disease from others with similar presentation.",
         "related": [{"concept": "pyrexia", "kind": "related"}]},
        {"id": "fever", "label": "fever", "definition": "Elevated body temperature.", "related": []},
        {"id": "pyrexia", "label": "pyrexia", "definition": "Clinical term for raised body temperature.",
         "related": [{"concept": "fever", "kind": "related"}]},
    ],
    "flow_edges": [
        {"from": "Admit", "to": "Examine", "kind": "precedes"},
        {"from": "Examine", "to": "Diagnosis", "kind": "precedes"},
        {"from": "Diagnosis", "to": "Plan-Treatment", "kind": "precedes"},
    ],
    "assoc_edges": [
        {"activity": "Admit", "content": "Case", "role": "produces"},
        {"activity": "Examine", "content": "Case", "role": "consumes"},
        {"activity": "Examine", "content": "Initial Impression", "role": "produces"},
        {"activity": "Examine", "content": "Test Result", "role": "produces"},
        {"activity": "Diagnosis", "content": "Differential Diagnostic", "role": "produces"},
        {"activity": "Diagnosis", "content": "Initial Impression", "role": "consumes"},
        {"activity": "Diagnosis", "content": "Test Result", "role": "consumes"},
        {"activity": "Plan-Treatment", "content": "Treatment Plan", "role": "produces"},
        {"activity": "Plan-Treatment", "content": "Differential Diagnostic", "role": "consumes"},
    ],
    "template_edges": [
        {"from": "Differential Diagnostic", "to": "Case", "kind": "DS"},
        {"from": "Differential Diagnostic", "to": "Initial Impression", "kind": "RS"},
        {"from": "Differential Diagnostic", "to": "Test Result", "kind": "RS"},
        {"from": "Treatment Plan", "to": "Differential Diagnostic", "kind": "DS"},
    ],
    "semantic_links": [
        {"category": "Differential Diagnostic", "concept": "differential-diagnosis"},
        {"category": "Differential Diagnostic", "concept": "pyrexia"},
        {"category": "Diagnosis", "concept": "differential-diagnosis"},
    ],
}

LITERATURE_REVIEW = {
    "id": "literature-review",
    "name": "Literature review",
    "version": 1,
    "activities": [
        {"id": "Conduct-Review", "name": "Conduct review", "description": "The review as a whole."},
        {"id": "Plan-Review", "name": "Plan review", "description": "Fix scope, questions, and criteria."},
        {"id": "Search-Literature", "name": "Search literature", "description": "Run and log database queries."},
        {"id": "Screen-Papers", "name": "Screen papers", "description": "Keep or drop records against the criteria."},
        {"id": "Synthesize", "name": "Synthesize", "description": "Extract and combine evidence."},
        {"id": "Draft-Report", "name": "Draft report", "description": "Write the findings up."},
    ],
    "contents": [
        {"id": "Protocol", "name": "Protocol", "description": "Scope, questions, inclusion criteria."},
        {"id": "Search Log", "name": "Search log", "description": "Queries run and record counts."},
        {"id": "Screening Decision", "name": "Screening decision", "description": "Kept/dropped records with reasons."},
        {"id": "Evidence Note", "name": "Evidence note", "description": "Extracted finding from the retained studies."},
        {"id": "Report Draft", "name": "Report draft", "description": "Draft of the review report."},
    ],
    "concepts": [
        {"id": "systematic-review", "label": "systematic review",
         "definition": "Review following an explicit, reproducible protocol.", "related": []},
        {"id": "prisma", "label": "prisma", "definition": "Reporting checklist for systematic reviews.",
         "related": [{"concept": "systematic-review", "kind": "related"}]},
    ],
    "flow_edges": [
        {"from": "Conduct-Review", "to": "Plan-Review", "kind": "decomposes-into"},
        {"from": "Conduct-Review", "to": "Search-Literature", "kind": "decomposes-into"},
        {"from": "Conduct-Review", "to": "Screen-Papers", "kind": "decomposes-into"},
        {"from": "Conduct-Review", "to": "Synthesize", "kind": "decomposes-into"},
        {"from": "Conduct-Review", "to": "Draft-Report", "kind": "decomposes-into"},
        {"from": "Plan-Review", "to": "Search-Literature", "kind": "precedes"},
        {"from": "Search-Literature", "to": "Screen-Papers", "kind": "precedes"},
        {"from": "Screen-Papers", "to": "Synthesize", "kind": "precedes"},
        {"from": "Synthesize", "to": "Draft-Report", "kind": "precedes"},
        {"from": "Synthesize", "to": "Search-Literature", "kind": "iterates-to"},
    ],
    "assoc_edges": [
        {"activity": "Plan-Review", "content": "Protocol", "role": "produces"},
        {"activity": "Search-Literature", "content": "Search Log", "role": "produces"},
        {"activity": "Search-Literature", "content": "Protocol", "role": "consumes"},
        {"activity": "Screen-Papers", "content": "Screening Decision", "role": "produces"},
        {"activity": "Screen-Papers", "content": "Search Log", "role": "consumes"},
        {"activity": "Synthesize", "content": "Evidence Note", "role": "produces"},
        {"activity": "Synthesize", "content": "Screening Decision", "role": "consumes"},
        {"activity": "Draft-Report", "content": "Report Draft", "role": "produces"},
        {"activity": "Draft-Report", "content": "Evidence Note", "role": "consumes"},
    ],
    "template_edges": [
        {"from": "Evidence Note", "to": "Protocol", "kind": "DS"},
        {"from": "Report Draft", "to": "Evidence Note", "kind": "DS"},
        {"from": "Screening Decision", "to": "Search Log", "kind": "RS"},
    ],
    "semantic_links": [
        {"category": "Protocol", "concept": "systematic-review"},
        {"category": "Report Draft", "concept": "prisma"},
    ],
}


def write_schema(doc: dict, filename: str) -> None:
    schema = parse_schema(json.dumps(doc))
    report = validate_schema(schema)
    assert report.ok, report.to_dict()
    (FIXTURES / filename).write_text(serialize_schema(schema), encoding="utf-8")
    print(f"wrote {filename}: {len(schema.activities)} activities, {len(schema.contents)} contents, "
          f"{len(report.warnings)} warnings")


if __name__ == "__main__":
    FIXTURES.mkdir(exist_ok=True)
    write_schema(PATIENT_CARE, "patient-care.schema.json")
    write_schema(LITERATURE_REVIEW, "literature-review.schema.json")
