import { describe, expect, it } from "vitest";

import { InputRamp, RAMP_RATE, RELEASE_DECAY_S } from "../src/input";

const DT = 1 / 50;

function run(ramp: InputRamp, seconds: number): void {
  const ticks = Math.round(seconds / DT);
  for (let i = 0; i < ticks; i += 1) ramp.step(DT);
}

describe("digital ramping", () => {
  it("emits (0, 0) with no keys held", () => {
    const ramp = new InputRamp();
    run(ramp, 1.0);
    expect(ramp.command()).toEqual({ throttle: 0, brake: 0, steering: 0 });
  });

  it("ramps to full throttle at the documented rate", () => {
    const ramp = new InputRamp();
    ramp.setKey("forward", true);
    run(ramp, 0.2); // 10 ticks
    expect(ramp.command().throttle).toBeCloseTo(RAMP_RATE * 0.2, 9);
    run(ramp, 0.3); // reaches 1.0 exactly at 1/RAMP_RATE seconds
    expect(ramp.command().throttle).toBe(1);
    run(ramp, 1.0);
    expect(ramp.command().throttle).toBe(1); // saturates
  });

  it("decays a full deflection to zero over the release window", () => {
    const ramp = new InputRamp();
    ramp.setKey("left", true);
    run(ramp, 1.0);
    expect(ramp.command().steering).toBe(1);
    ramp.setKey("left", false);
    run(ramp, 0.12); // 6 ticks into the 0.3 s window
    expect(ramp.command().steering).toBeCloseTo(1 - 0.12 / RELEASE_DECAY_S, 9);
    run(ramp, 0.2); // past the window: exactly zero
    expect(ramp.command().steering).toBe(0);
  });

  it("opposing keys ramp toward neutral", () => {
    const ramp = new InputRamp();
    ramp.setKey("forward", true);
    run(ramp, 0.5);
    ramp.setKey("reverse", true); // both held: target 0
    run(ramp, 0.2);
    expect(ramp.command().throttle).toBeCloseTo(1 - RAMP_RATE * 0.2, 9);
  });

  it("maps negative longitudinal input to brake", () => {
    const ramp = new InputRamp();
    ramp.setKey("reverse", true);
    run(ramp, 0.5);
    expect(ramp.command()).toEqual({ throttle: 0, brake: 1, steering: 0 });
  });
});

describe("analog passthrough", () => {
  it("uses gamepad values verbatim and clamps to [-1, 1]", () => {
    const ramp = new InputRamp();
    ramp.setAnalog(0.37, -1.8);
    ramp.step(DT);
    expect(ramp.command()).toEqual({ throttle: 0.37, brake: 0, steering: -1 });
  });

  it("resumes ramping from the analog value once cleared", () => {
    const ramp = new InputRamp();
    ramp.setAnalog(0.6, 0);
    ramp.step(DT);
    ramp.clearAnalog();
    run(ramp, RELEASE_DECAY_S); // more than 0.6 deflection needs to decay
    expect(ramp.command().throttle).toBe(0);
  });
});
