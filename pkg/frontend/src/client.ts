/**
 * Cockpit client: one socket, one session, one fixed-rate input loop.
 *
 * Commands stream at COMMAND_RATE_HZ while this session holds driver
 * authority; losing authority (refusal) pauses the input loop. The socket
 * and timer are injectable so the whole client runs under test without a
 * network or a clock.
 */

import { InputRamp } from "./input";
import {
  decodeMessage,
  decodeScanFrame,
  encodeMessage,
  makeCommand,
  makeHello,
  makeMode,
  ProtocolError,
  Role,
} from "./protocol";
import { UiSession } from "./session";

export const COMMAND_RATE_HZ = 50;
export const COMMAND_INTERVAL_S = 1 / COMMAND_RATE_HZ;

/** Structural subset of a browser WebSocket. */
export interface SocketLike {
  send(data: string | ArrayBuffer): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((event: { data: string | ArrayBuffer }) => void) | null;
  onclose: (() => void) | null;
}

export class CockpitClient {
  readonly session: UiSession;
  readonly input: InputRamp;
  private socket: SocketLike | null = null;
  private scanRMax: number | undefined;

  constructor(session?: UiSession, input?: InputRamp, scanRMax?: number) {
    this.session = session ?? new UiSession();
    this.input = input ?? new InputRamp();
    this.scanRMax = scanRMax;
  }

  /** Attach a socket and perform the hello handshake as `role`. */
  connect(socket: SocketLike, role: Role): void {
    this.socket = socket;
    this.session.status = "connecting";
    socket.onopen = () => {
      socket.send(encodeMessage(makeHello(role)));
    };
    socket.onmessage = (event) => {
      if (typeof event.data === "string") {
        try {
          this.session.handleMessage(decodeMessage(event.data));
        } catch (err) {
          if (err instanceof ProtocolError) {
            this.session.lastError = err.message;
            return;
          }
          throw err;
        }
      } else {
        this.session.handleScan(decodeScanFrame(event.data, this.scanRMax));
      }
    };
    socket.onclose = () => {
      this.session.status = "disconnected";
      this.session.authority = false;
    };
  }

  disconnect(): void {
    this.socket?.close();
    this.socket = null;
  }

  /**
   * One input-loop step: advance the ramp by dt and, while holding
   * authority, send the resulting command.
   */
  tick(dt: number): void {
    this.input.step(dt);
    if (this.socket === null || !this.session.authority) return;
    const { throttle, brake, steering } = this.input.command();
    this.socket.send(encodeMessage(makeCommand(throttle, brake, steering)));
  }

  sendMode(mode: string): void {
    this.socket?.send(encodeMessage(makeMode(mode)));
  }

  /** Run the input loop on a real timer; returns a stop function. */
  start(
    setIntervalFn: (fn: () => void, ms: number) => unknown = setInterval,
    clearIntervalFn: (handle: unknown) => void = clearInterval as (
      handle: unknown,
    ) => void,
  ): () => void {
    const handle = setIntervalFn(
      () => this.tick(COMMAND_INTERVAL_S),
      1000 * COMMAND_INTERVAL_S,
    );
    return () => clearIntervalFn(handle);
  }
}
