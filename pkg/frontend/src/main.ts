/**
 * Browser entry point: wires the session client, orbit camera, drag
 * controller and canvas painter together.
 *
 * Interaction: left-drag on a handle moves that control point in the
 * camera-parallel plane (server-verified); left-drag elsewhere orbits;
 * wheel zooms.  The side panel holds display toggles, subdivision depth,
 * analysis triggers and the exact-coordinate entry fallback.
 */
import { SessionClient, type Vec3 } from "./api.js";
import { pickVertex, rotated, zoomed } from "./camera.js";
import { DragController } from "./drag.js";
import { buildScene, paintScene } from "./scene.js";
import { emptyScene, initialViewState, markersFromAnalysis } from "./state.js";

const canvas = document.getElementById("view") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const panel = document.getElementById("panel")!;

const client = new SessionClient("");
const view = initialViewState();
const scene = emptyScene();
let drag: DragController | null = null;

function viewport() {
  return { width: canvas.width, height: canvas.height };
}

function repaint() {
  if (drag) scene.snapshot = drag.current;
  paintScene(ctx, viewport(), buildScene(scene, view, viewport()));
}

async function refreshDerived() {
  if (!view.sessionId) return;
  const samples = await client.samples(view.sessionId, 512);
  scene.curveSamples = samples.points;
  if (view.toggles.subdivision) {
    const sub = await client.subdivision(view.sessionId, view.subdivisionU, view.subdivisionDepth);
    scene.subdivisionNets = sub.polygons;
  } else {
    scene.subdivisionNets = [];
  }
  repaint();
}

async function boot() {
  const fixture = new URLSearchParams(location.search).get("fixture") ?? "trefoil";
  const snapshot = await client.createSession({ fixture });
  view.sessionId = snapshot.id;
  drag = new DragController(client, snapshot);
  scene.snapshot = snapshot;

  client.events(snapshot.id, (event) => {
    if (event.type === "polygon-changed" && event.quick) {
      scene.quick = event.quick;
      if (drag && event.version !== undefined) drag.absorbQuick(event.version, event.quick);
      void refreshDerived();
    } else if (event.type === "analysis-complete" && event.result) {
      scene.crossingMarkers = markersFromAnalysis(
        event.result as Record<string, unknown>, scene.curveSamples);
      repaint();
    }
  });

  const fresh = await client.getPolygon(snapshot.id);
  drag.absorb(fresh);
  await refreshDerived();
  buildPanel();
  repaint();
}

// ---------------------------------------------------------------------------
// pointer interaction

let mode: "idle" | "orbit" | "drag" = "idle";
let lastX = 0, lastY = 0;
let grabbed: number | null = null;

canvas.addEventListener("pointerdown", (e) => {
  lastX = e.offsetX;
  lastY = e.offsetY;
  if (!drag) return;
  grabbed = pickVertex(view.camera, canvas.width, canvas.height,
                       drag.polygon.slice(0, -1) as Vec3[], e.offsetX, e.offsetY);
  view.selectedVertex = grabbed;
  mode = grabbed === null ? "orbit" : "drag";
  canvas.setPointerCapture(e.pointerId);
  repaint();
});

canvas.addEventListener("pointermove", (e) => {
  if (mode === "idle") return;
  const dx = e.offsetX - lastX, dy = e.offsetY - lastY;
  lastX = e.offsetX;
  lastY = e.offsetY;
  if (mode === "orbit") {
    view.camera = rotated(view.camera, dx * 0.01, dy * 0.01);
    repaint();
  } else if (mode === "drag" && grabbed !== null && drag) {
    void drag.dragVertex(grabbed, view.camera, dx, dy).then((outcome) => {
      scene.snapshot = outcome.snapshot;
      if (outcome.snapshot.quick) scene.quick = outcome.snapshot.quick;
      repaint();
    });
  }
});

canvas.addEventListener("pointerup", () => {
  if (mode === "drag") void refreshDerived();
  mode = "idle";
  grabbed = null;
});

canvas.addEventListener("wheel", (e) => {
  e.preventDefault();
  view.camera = zoomed(view.camera, e.deltaY < 0 ? 1.1 : 1 / 1.1);
  repaint();
});

// ---------------------------------------------------------------------------
// control panel

function buildPanel() {
  panel.innerHTML = "";
  const toggles: [keyof typeof view.toggles, string][] = [
    ["polygon", "control polygon"],
    ["curve", "curve"],
    ["subdivision", "subdivision overlay"],
    ["crossings", "witness markers"],
  ];
  for (const [key, label] of toggles) {
    const row = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = view.toggles[key];
    box.addEventListener("change", () => {
      view.toggles[key] = box.checked;
      void refreshDerived();
    });
    row.append(box, ` ${label}`);
    panel.append(row);
  }

  const depth = document.createElement("input");
  depth.type = "number";
  depth.min = "0";
  depth.max = "6";
  depth.value = String(view.subdivisionDepth);
  depth.addEventListener("change", () => {
    view.subdivisionDepth = Number(depth.value);
    void refreshDerived();
  });
  const depthRow = document.createElement("label");
  depthRow.append("subdivision depth ", depth);
  panel.append(depthRow);

  const analyze = document.createElement("button");
  analyze.textContent = "run self-intersection + diagram analysis";
  analyze.addEventListener("click", () => {
    if (view.sessionId) void client.scheduleAnalysis(view.sessionId, ["selfx", "knot"]);
  });
  panel.append(analyze);

  // exact-coordinate fallback for the selected vertex
  const coords = document.createElement("input");
  coords.placeholder = "x y z for selected vertex";
  coords.addEventListener("keydown", (e) => {
    if (e.key !== "Enter" || view.selectedVertex === null || !drag) return;
    const parts = coords.value.trim().split(/\s+/).map(Number);
    if (parts.length === 3 && parts.every(Number.isFinite)) {
      void drag.setVertex(view.selectedVertex, parts as Vec3).then((outcome) => {
        scene.snapshot = outcome.snapshot;
        if (outcome.snapshot.quick) scene.quick = outcome.snapshot.quick;
        void refreshDerived();
      });
    }
  });
  panel.append(coords);
}

void boot();
