/**
 * Scene assembly and painting.
 *
 * `buildScene` is pure: (server data, view state, viewport) -> draw list.
 * `paintScene` walks the draw list onto a 2D canvas.  Separating the two
 * keeps every visibility/projection decision testable without a DOM.
 */
import type { Vec3 } from "./api.js";
import { project, type Camera } from "./camera.js";
import type { SceneData, ViewState } from "./state.js";

export interface Stroke {
  kind: "polyline";
  role: "polygon" | "curve" | "subdivision";
  points: { x: number; y: number }[];
  closed: boolean;
}

export interface Handle {
  kind: "handle";
  index: number;
  x: number;
  y: number;
  selected: boolean;
}

export interface Marker {
  kind: "marker";
  x: number;
  y: number;
  label: string;
}

export interface Badge {
  kind: "badge";
  text: string;
  tone: "ok" | "alert" | "neutral";
}

export type DrawItem = Stroke | Handle | Marker | Badge;

export interface Viewport {
  width: number;
  height: number;
}

export function buildScene(data: SceneData, view: ViewState, viewport: Viewport): DrawItem[] {
  const items: DrawItem[] = [];
  const { width, height } = viewport;
  const cam: Camera = view.camera;
  const p2 = (p: Vec3) => {
    const pr = project(cam, width, height, p);
    return { x: pr.x, y: pr.y };
  };

  if (!data.snapshot) {
    items.push({ kind: "badge", text: "no session", tone: "neutral" });
    return items;
  }
  const points = data.snapshot.polygon.points;

  if (view.toggles.polygon) {
    items.push({
      kind: "polyline",
      role: "polygon",
      points: points.map(p2),
      closed: false, // the closing vertex is stored explicitly
    });
    points.slice(0, -1).forEach((p, i) => {
      const pr = p2(p);
      items.push({ kind: "handle", index: i, x: pr.x, y: pr.y,
                   selected: view.selectedVertex === i });
    });
  }

  if (view.toggles.curve && data.curveSamples.length > 1) {
    items.push({ kind: "polyline", role: "curve",
                 points: data.curveSamples.map(p2), closed: false });
  }

  if (view.toggles.subdivision) {
    for (const net of data.subdivisionNets) {
      items.push({ kind: "polyline", role: "subdivision",
                   points: net.map(p2), closed: false });
    }
  }

  if (view.toggles.crossings) {
    for (const marker of data.crossingMarkers) {
      const pr = p2(marker.point);
      items.push({ kind: "marker", x: pr.x, y: pr.y, label: marker.label });
    }
  }

  if (data.quick) {
    items.push({
      kind: "badge",
      text: data.quick.simple
        ? "polygon: simple (exact)"
        : `polygon: SELF-INTERSECTING (segments ${data.quick.witness_segments})`,
      tone: data.quick.simple ? "ok" : "alert",
    });
    items.push({
      kind: "badge",
      text: `total curvature ${(data.quick.total_curvature / Math.PI).toFixed(2)} pi`
        + (data.quick.total_curvature > 4 * Math.PI ? "  (> 4 pi: knotting possible)" : ""),
      tone: "neutral",
    });
  }
  return items;
}

const ROLE_STYLE: Record<Stroke["role"], { stroke: string; width: number }> = {
  polygon: { stroke: "#7a8699", width: 1.5 },
  curve: { stroke: "#1f6feb", width: 2.25 },
  subdivision: { stroke: "#c9803a", width: 1.0 },
};

export function paintScene(ctx: CanvasRenderingContext2D, viewport: Viewport,
                           items: DrawItem[]): void {
  ctx.clearRect(0, 0, viewport.width, viewport.height);
  ctx.fillStyle = "#0d1117";
  ctx.fillRect(0, 0, viewport.width, viewport.height);

  let badgeY = 24;
  for (const item of items) {
    if (item.kind === "polyline") {
      const style = ROLE_STYLE[item.role];
      ctx.strokeStyle = style.stroke;
      ctx.lineWidth = style.width;
      ctx.beginPath();
      item.points.forEach((p, i) => (i === 0 ? ctx.moveTo(p.x, p.y) : ctx.lineTo(p.x, p.y)));
      if (item.closed) ctx.closePath();
      ctx.stroke();
    } else if (item.kind === "handle") {
      ctx.fillStyle = item.selected ? "#e3b341" : "#c0c8d4";
      ctx.beginPath();
      ctx.arc(item.x, item.y, item.selected ? 6 : 4, 0, 2 * Math.PI);
      ctx.fill();
    } else if (item.kind === "marker") {
      ctx.strokeStyle = "#f85149";
      ctx.lineWidth = 1.5;
      ctx.beginPath();
      ctx.arc(item.x, item.y, 8, 0, 2 * Math.PI);
      ctx.stroke();
      ctx.fillStyle = "#f85149";
      ctx.font = "11px system-ui";
      ctx.fillText(item.label, item.x + 10, item.y - 4);
    } else {
      ctx.font = "13px system-ui";
      ctx.fillStyle = item.tone === "ok" ? "#3fb950" : item.tone === "alert" ? "#f85149" : "#8b949e";
      ctx.fillText(item.text, 12, badgeY);
      badgeY += 18;
    }
  }
}
