/** Browser entry point: wires keyboard, canvas, and the websocket. */

import { CockpitClient, COMMAND_INTERVAL_S, SocketLike } from "./client";
import { Key } from "./input";
import { beamAngles, renderScene, View, zoom } from "./render";
import { Role } from "./protocol";

const KEY_MAP: Record<string, Key> = {
  ArrowUp: "forward",
  KeyW: "forward",
  ArrowDown: "reverse",
  KeyS: "reverse",
  ArrowLeft: "left",
  KeyA: "left",
  ArrowRight: "right",
  KeyD: "right",
};

export function startCockpit(
  canvas: HTMLCanvasElement,
  url: string,
  role: Role,
): CockpitClient {
  const client = new CockpitClient(undefined, undefined, 12.0);
  const socket = new WebSocket(url);
  socket.binaryType = "arraybuffer";
  client.connect(socket as unknown as SocketLike, role);

  window.addEventListener("keydown", (e) => {
    const key = KEY_MAP[e.code];
    if (key !== undefined) {
      client.input.setKey(key, true);
      e.preventDefault();
    }
  });
  window.addEventListener("keyup", (e) => {
    const key = KEY_MAP[e.code];
    if (key !== undefined) client.input.setKey(key, false);
  });

  let view: View = {
    centerX: 0,
    centerY: 0,
    scale: 60,
    width: canvas.width,
    height: canvas.height,
  };
  canvas.addEventListener("wheel", (e) => {
    view = zoom(view, e.deltaY < 0 ? 1.25 : 0.8);
    e.preventDefault();
  });

  const config = {
    vehicleLength: 0.5,
    vehicleWidth: 0.3,
    scanAngles: beamAngles(-Math.PI, (Math.PI / 180) * 1.0, 360),
  };
  const ctx = canvas.getContext("2d");
  const draw = () => {
    if (ctx !== null) renderScene(ctx, client.session, view, config);
    requestAnimationFrame(draw);
  };
  requestAnimationFrame(draw);

  setInterval(() => client.tick(COMMAND_INTERVAL_S), 1000 * COMMAND_INTERVAL_S);
  return client;
}
