import asyncio
import json
import math

import numpy as np
import pytest

from twinsim import PROTOCOL_VERSION
from twinsim.dynamics import ActuatorCommand, Vehicle
from twinsim.params import load_vehicle_params
from twinsim.telemetry import (
    DEAD_MAN_TIMEOUT,
    ProtocolError,
    SessionManager,
    TelemetryServer,
    decode_message,
    encode_message,
    make_command,
    make_state_frame,
)
from twinsim.telemetry.protocol import make_ranges_payload

SAMPLE_MESSAGES = [
    {"type": "hello", "role": "driver"},
    {"type": "accept", "session": "session-1", "role": "driver"},
    {"type": "refuse", "reason": "control held by session-1"},
    {"type": "state", "tick": 42, "velocity": [0.0, 0.0, 0.0]},
    {"type": "map_meta", "resolution": 0.05, "width": 100, "height": 80,
     "origin": [0.0, 0.0, 0.0]},
    {"type": "command", "throttle": 0.5, "brake": 0.0, "steering": -0.2,
     "handbrake": False},
    {"type": "mode", "mode": "track"},
    {"type": "ack", "mode": "track"},
    {"type": "error", "reason": "unknown message type"},
]


class TestProtocol:
    @pytest.mark.parametrize("message", SAMPLE_MESSAGES,
                             ids=[m["type"] for m in SAMPLE_MESSAGES])
    def test_roundtrip_every_type(self, message):
        decoded = decode_message(encode_message(message))
        for key, value in message.items():
            assert decoded[key] == value
        assert decoded["version"] == PROTOCOL_VERSION

    def test_unknown_type_rejected(self):
        with pytest.raises(ProtocolError, match="unknown message type"):
            decode_message(json.dumps({"type": "warp", "version": 1}))

    def test_missing_version_rejected(self):
        with pytest.raises(ProtocolError, match="version"):
            decode_message(json.dumps({"type": "mode", "mode": "x"}))

    def test_missing_required_field(self):
        with pytest.raises(ProtocolError, match="throttle"):
            decode_message(json.dumps({"type": "command", "version": 1}))

    def test_not_json(self):
        with pytest.raises(ProtocolError):
            decode_message("{nope")

    def test_inf_ranges_become_null(self):
        payload = make_ranges_payload(np.array([1.0, math.inf, 2.5]))
        assert payload == [1.0, None, 2.5]
        assert "null" in json.dumps(payload)

    def test_state_frame_at_rest_zero_velocity(self):
        vehicle = Vehicle(load_vehicle_params("racer_1_10"))
        state = vehicle.initial_state()
        frame = make_state_frame(state, 0.0)
        assert frame["velocity"] == [0.0, 0.0, 0.0]
        assert frame["omega"] == 0.0
        decoded = decode_message(encode_message(frame))
        assert decoded["pose"] == frame["pose"]


class TestSessionManager:
    def test_viewer_and_driver_accept(self):
        mgr = SessionManager()
        assert mgr.register("a", "viewer", PROTOCOL_VERSION, 0.0)[0]
        assert mgr.register("b", "driver", PROTOCOL_VERSION, 0.0)[0]

    def test_second_driver_refused_with_holder(self):
        mgr = SessionManager()
        mgr.register("first", "driver", PROTOCOL_VERSION, 0.0)
        accepted, detail = mgr.register("second", "driver", PROTOCOL_VERSION, 0.0)
        assert not accepted
        assert "first" in detail

    def test_version_mismatch_refused(self):
        mgr = SessionManager()
        accepted, detail = mgr.register("a", "driver", PROTOCOL_VERSION + 1, 0.0)
        assert not accepted
        assert "version" in detail

    def test_authority_released_on_unregister(self):
        mgr = SessionManager()
        mgr.register("first", "driver", PROTOCOL_VERSION, 0.0)
        mgr.unregister("first")
        assert mgr.register("second", "driver", PROTOCOL_VERSION, 0.0)[0]

    def test_latest_wins_within_tick(self):
        mgr = SessionManager()
        mgr.register("d", "driver", PROTOCOL_VERSION, 0.0)
        for throttle in (0.1, 0.5, 0.9):
            mgr.submit_command("d", make_command(throttle=throttle), 0.0)
        assert mgr.poll_command(0.0).throttle == 0.9

    def test_viewer_cannot_command(self):
        mgr = SessionManager()
        mgr.register("v", "viewer", PROTOCOL_VERSION, 0.0)
        assert not mgr.submit_command("v", make_command(throttle=1.0), 0.0)
        assert mgr.poll_command(0.0).throttle == 0.0

    def test_dead_man_zeroes_command(self):
        mgr = SessionManager()
        mgr.register("d", "driver", PROTOCOL_VERSION, 0.0)
        mgr.submit_command("d", make_command(throttle=0.7), 0.0)
        assert mgr.poll_command(0.4).throttle == 0.7
        assert mgr.poll_command(DEAD_MAN_TIMEOUT + 0.01).throttle == 0.0
        # and the stale command does not come back
        assert mgr.poll_command(0.45).throttle == 0.0

    def test_no_client_default_command(self):
        assert SessionManager().poll_command(0.0) == ActuatorCommand()


async def _recv_until(ws, predicate, limit=200):
    for _ in range(limit):
        raw = await asyncio.wait_for(ws.recv(), timeout=2.0)
        if isinstance(raw, bytes):
            continue
        message = decode_message(raw)
        if predicate(message):
            return message
    raise AssertionError("expected message not received")


@pytest.fixture()
def anyio_backend():
    return "asyncio"


@pytest.mark.anyio
async def test_server_loopback():
    """End-to-end: handshake, command echo in state frames, authority."""
    import websockets

    vehicle = Vehicle(load_vehicle_params("racer_1_10"))
    state = vehicle.initial_state()
    server = await TelemetryServer().start(state_rate_hz=200.0)
    loop = asyncio.get_running_loop()
    running = True

    async def sim_loop():
        nonlocal state
        while running:
            cmd = server.poll_command(loop.time())
            for _ in range(10):
                state = vehicle.step(state, cmd)
            server.publish_state(state, state.tick * vehicle.dt)
            await asyncio.sleep(0.005)

    sim_task = asyncio.create_task(sim_loop())
    uri = f"ws://127.0.0.1:{server.port}"
    try:
        async with websockets.connect(uri) as driver:
            await driver.send(encode_message(
                {"type": "hello", "role": "driver"}))
            accept = decode_message(await driver.recv())
            assert accept["type"] == "accept"

            # malformed message: error reply, connection preserved
            await driver.send("{broken")
            err = await _recv_until(driver, lambda m: m["type"] == "error")
            assert "JSON" in err["reason"] or "valid" in err["reason"]

            await driver.send(encode_message(make_command(throttle=0.5)))
            frame = await _recv_until(
                driver, lambda m: m["type"] == "state" and m["throttle"] == 0.5)
            assert frame["tick"] > 0

            # a second driver is refused and told who holds control
            async with websockets.connect(uri) as second:
                await second.send(encode_message(
                    {"type": "hello", "role": "driver"}))
                refuse = decode_message(await second.recv())
                assert refuse["type"] == "refuse"
                assert accept["session"] in refuse["reason"]

            # viewers are welcome alongside
            async with websockets.connect(uri) as viewer:
                await viewer.send(encode_message(
                    {"type": "hello", "role": "viewer"}))
                ok = decode_message(await viewer.recv())
                assert ok["type"] == "accept"
                frame = await _recv_until(viewer, lambda m: m["type"] == "state")
                assert "pose" in frame
    finally:
        running = False
        sim_task.cancel()
        await server.stop()


@pytest.mark.anyio
async def test_scan_binary_broadcast():
    import websockets

    from twinsim.sensors import Lidar2dParams, decode_scan, encode_scan

    params = Lidar2dParams(r_min=0.15, r_max=12.0)
    server = await TelemetryServer().start(scan_rate_hz=100.0)
    ranges = np.array([1.0, np.inf, 3.0])
    try:
        async with websockets.connect(
                f"ws://127.0.0.1:{server.port}") as client:
            await client.send(encode_message(
                {"type": "hello", "role": "viewer"}))
            await client.recv()
            server.publish_scan(encode_scan(ranges, params, frame_id=5))
            while True:
                raw = await asyncio.wait_for(client.recv(), timeout=2.0)
                if isinstance(raw, bytes):
                    break
            decoded, frame_id = decode_scan(raw, params)
            assert frame_id == 5
            assert np.array_equal(np.isinf(decoded), np.isinf(ranges))
    finally:
        await server.stop()
