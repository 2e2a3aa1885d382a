import { CommandMessage, parseServerMessage, ServerMessage } from "./protocol.js";

export interface TeleopSocket {
  send(cmd: CommandMessage): void;
  close(): void;
}

export interface SocketHandlers {
  onOpen(): void;
  onClose(): void;
  onMessage(msg: ServerMessage | null): void;
}

// Thin wrapper so the rest of the app never sees a raw WebSocket. The
// handlers must only enqueue state; rendering runs on animation frames.
export function connectTeleop(server: string, handlers: SocketHandlers): TeleopSocket {
  const ws = new WebSocket(`ws://${server}/ws`);
  ws.onopen = () => handlers.onOpen();
  ws.onclose = () => handlers.onClose();
  ws.onerror = () => handlers.onClose();
  ws.onmessage = (ev: MessageEvent) => {
    handlers.onMessage(typeof ev.data === "string" ? parseServerMessage(ev.data) : null);
  };
  return {
    send(cmd: CommandMessage): void {
      if (ws.readyState === WebSocket.OPEN) ws.send(JSON.stringify(cmd));
    },
    close(): void {
      ws.close();
    },
  };
}
