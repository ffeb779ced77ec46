/** Browser entry point: resolve the annotator name and mount the app. */

import { ApiClient } from "./api.js";
import { App } from "./app.js";

function resolveAnnotator(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("annotator");
  if (fromQuery && fromQuery.trim()) {
    window.localStorage.setItem("annotator", fromQuery.trim());
    return fromQuery.trim();
  }
  const stored = window.localStorage.getItem("annotator");
  if (stored && stored.trim()) {
    return stored.trim();
  }
  const typed = window.prompt("Annotator name:");
  const name = (typed ?? "").trim() || "anonymous";
  window.localStorage.setItem("annotator", name);
  return name;
}

const root = document.getElementById("app");
if (root === null) {
  throw new Error("missing #app element");
}
const app = new App(root as HTMLElement, resolveAnnotator(), new ApiClient(""));
void app.start();
