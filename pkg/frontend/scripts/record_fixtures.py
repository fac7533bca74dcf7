#!/usr/bin/env python3
"""Record real service responses as frontend test fixtures.

Boots the actual HTTP service in-process, drives the chain-example flow
the end-to-end tests replay, and stores each response's exact bytes under
frontend/tests/fixtures/.  Re-run after changing the service:

    python3 frontend/scripts/record_fixtures.py
"""

import json
import pathlib
import tempfile

from fastapi.testclient import TestClient

from sedmap import formats
from sedmap.fixtures import chain_map
from sedmap.service import create_app

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def main():
    FIXTURES.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as data_dir:
        client = TestClient(create_app(data_dir))
        doc = json.loads(formats.save_map(chain_map()))
        created = client.post("/v1/maps", json=doc)
        created.raise_for_status()
        map_id = created.json()["id"]

        recordings = {
            "map_document.json": client.get(f"/v1/maps/{map_id}"),
            "analyze.json": client.post(f"/v1/maps/{map_id}/analyze", json={}),
            "simulate_p1_t2.json": client.post(
                f"/v1/maps/{map_id}/simulate",
                json={"schedule": {"0": {"p": 1.0}}, "horizon": 2},
            ),
            "simulate_zero_t2.json": client.post(
                f"/v1/maps/{map_id}/simulate",
                json={"schedule": {"0": {"p": 0.0}}, "horizon": 2},
            ),
            "simulate_horizon0.json": client.post(
                f"/v1/maps/{map_id}/simulate",
                json={"schedule": {"0": {"p": 1.0}}, "horizon": 0},
            ),
            "invert_desired1.json": client.post(
                f"/v1/maps/{map_id}/scenarios/invert",
                json={"controls": ["p"], "target": {"factor": "q", "desired_delta": 1.0, "horizon": 2}},
            ),
            "invert_desired0.json": client.post(
                f"/v1/maps/{map_id}/scenarios/invert",
                json={"controls": ["p"], "target": {"factor": "q", "desired_delta": 0.0, "horizon": 2}},
            ),
            "compare.json": client.post(
                f"/v1/maps/{map_id}/scenarios/compare",
                json={
                    "scenarios": [
                        {"name": "A", "controls": ["p"], "schedule": {"0": {"p": 1.0}}, "horizon": 2},
                        {"name": "B", "controls": ["p"], "schedule": {"0": {"p": 0.4}}, "horizon": 2},
                    ],
                    "target": {"factor": "q", "desired_delta": 0.45, "horizon": 2},
                },
            ),
            "error_bad_factor.json": client.post(
                f"/v1/maps/{map_id}/scenarios/run",
                json={"name": "bad", "controls": ["p"], "schedule": {"0": {"q": 1.0}}, "horizon": 2},
            ),
        }
        for name, response in recordings.items():
            if not name.startswith("error"):
                response.raise_for_status()
            (FIXTURES / name).write_bytes(response.content)
            print(f"recorded {name} ({len(response.content)} bytes)")


if __name__ == "__main__":
    main()
