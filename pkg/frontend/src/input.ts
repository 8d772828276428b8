/**
 * Digital-to-analog input ramping.
 *
 * Held keys ramp their axis toward full deflection at a fixed
 * RAMP_RATE = 2.0 units/s; releasing everything decays the axis linearly
 * to zero over RELEASE_DECAY_S = 0.3 s (from full deflection). Both
 * constants are fixed so a logged key sequence replays to the exact same
 * command stream. Analog (gamepad) input passes through unmodified and
 * overrides the ramp while engaged.
 */

export const RAMP_RATE = 2.0; // units per second toward a held key's target
export const RELEASE_DECAY_S = 0.3; // seconds from full deflection to zero

export type Key = "forward" | "reverse" | "left" | "right";

export interface AxisCommand {
  throttle: number;
  brake: number;
  steering: number;
}

function towards(value: number, target: number, maxStep: number): number {
  const err = target - value;
  if (Math.abs(err) <= maxStep) return target;
  return value + Math.sign(err) * maxStep;
}

export class InputRamp {
  /** Longitudinal axis in [-1, 1]; negative maps to brake. */
  accel = 0;
  /** Steering axis in [-1, 1]; positive steers left. */
  steer = 0;

  private keys: Record<Key, boolean> = {
    forward: false,
    reverse: false,
    left: false,
    right: false,
  };
  private analog: { accel: number; steer: number } | null = null;

  setKey(key: Key, down: boolean): void {
    this.keys[key] = down;
  }

  /** Gamepad passthrough; values are used verbatim until cleared. */
  setAnalog(accel: number, steer: number): void {
    this.analog = {
      accel: Math.max(-1, Math.min(1, accel)),
      steer: Math.max(-1, Math.min(1, steer)),
    };
  }

  clearAnalog(): void {
    this.analog = null;
  }

  /** Advance the ramp by dt seconds. */
  step(dt: number): void {
    if (this.analog !== null) {
      this.accel = this.analog.accel;
      this.steer = this.analog.steer;
      return;
    }
    this.accel = this.stepAxis(this.accel, this.keys.forward, this.keys.reverse, dt);
    this.steer = this.stepAxis(this.steer, this.keys.left, this.keys.right, dt);
  }

  private stepAxis(value: number, positive: boolean, negative: boolean, dt: number): number {
    const target = (positive ? 1 : 0) + (negative ? -1 : 0);
    if (positive || negative) {
      return towards(value, target, RAMP_RATE * dt);
    }
    return towards(value, 0, (dt / RELEASE_DECAY_S) * 1.0);
  }

  command(): AxisCommand {
    return {
      throttle: Math.max(0, this.accel),
      brake: Math.max(0, -this.accel),
      steering: this.steer,
    };
  }
}
