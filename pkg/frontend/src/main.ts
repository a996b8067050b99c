// Browser entry: connect to the service, join (or start) a task instance,
// and mount the workspace.

import { ApiClient } from "./api.js";
import { App } from "./app.js";

async function start(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("api") ?? "http://127.0.0.1:8765";
  const actor = params.get("actor") ?? "worker";
  const schemaId = params.get("schema") ?? "patient-care";
  const schemaVersion = Number(params.get("version") ?? "1");
  const title = params.get("title") ?? "New task";

  const api = new ApiClient(base);
  const app = new App(document.getElementById("workspace")!, api);

  await api.createSession(actor);
  const instance = await api.beginInstance(schemaId, schemaVersion, title);
  await app.boot(actor, instance);
}

start().catch((error) => {
  const root = document.getElementById("workspace");
  if (root) root.textContent = `failed to start: ${error}`;
});
