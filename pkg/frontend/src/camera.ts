/**
 * Orbit camera with orthographic projection.
 *
 * Pure functions of camera state: rotating, zooming and panning never touch
 * session geometry.  Drags invert exactly: a screen delta maps to a world
 * delta in the camera-parallel plane through the grabbed point.
 */
import type { Vec3 } from "./api.js";

export interface Camera {
  yaw: number;      // radians around +z
  pitch: number;    // radians around the camera's right axis
  zoom: number;     // pixels per world unit
  center: Vec3;     // world point mapped to the canvas center
}

export const defaultCamera = (): Camera => ({ yaw: 0.6, pitch: 0.4, zoom: 18, center: [0, 0, 0] });

/** Orthonormal camera basis: right, up, forward (view direction). */
export function basis(camera: Camera): { right: Vec3; up: Vec3; forward: Vec3 } {
  const cy = Math.cos(camera.yaw), sy = Math.sin(camera.yaw);
  const cp = Math.cos(camera.pitch), sp = Math.sin(camera.pitch);
  const right: Vec3 = [cy, sy, 0];
  const forward: Vec3 = [-sy * cp, cy * cp, -sp];
  const up: Vec3 = [sy * sp, -cy * sp, -cp];
  // up = forward x right so that screen y grows downward like canvas pixels
  return { right, up, forward };
}

const dot = (a: Vec3, b: Vec3) => a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
const sub = (a: Vec3, b: Vec3): Vec3 => [a[0] - b[0], a[1] - b[1], a[2] - b[2]];

export interface Projected {
  x: number;
  y: number;
  depth: number;
}

/** World point to canvas pixels (orthographic). */
export function project(camera: Camera, width: number, height: number, p: Vec3): Projected {
  const { right, up, forward } = basis(camera);
  const rel = sub(p, camera.center);
  return {
    x: width / 2 + camera.zoom * dot(rel, right),
    y: height / 2 + camera.zoom * dot(rel, up),
    depth: dot(rel, forward),
  };
}

/**
 * Screen-pixel delta to a world delta in the camera-parallel plane; the
 * exact inverse of `project` restricted to that plane.
 */
export function screenDeltaToWorld(camera: Camera, dx: number, dy: number): Vec3 {
  const { right, up } = basis(camera);
  const wx = dx / camera.zoom, wy = dy / camera.zoom;
  return [
    wx * right[0] + wy * up[0],
    wx * right[1] + wy * up[1],
    wx * right[2] + wy * up[2],
  ];
}

export function rotated(camera: Camera, dyaw: number, dpitch: number): Camera {
  const limit = Math.PI / 2 - 1e-3;
  return {
    ...camera,
    yaw: camera.yaw + dyaw,
    pitch: Math.max(-limit, Math.min(limit, camera.pitch + dpitch)),
  };
}

export function zoomed(camera: Camera, factor: number): Camera {
  return { ...camera, zoom: Math.max(0.5, Math.min(500, camera.zoom * factor)) };
}

/** Pick the nearest projected vertex within `radius` pixels, or null. */
export function pickVertex(camera: Camera, width: number, height: number,
                           points: Vec3[], sx: number, sy: number,
                           radius = 9): number | null {
  let best: number | null = null;
  let bestDist = radius;
  points.forEach((p, i) => {
    const proj = project(camera, width, height, p);
    const d = Math.hypot(proj.x - sx, proj.y - sy);
    if (d <= bestDist) {
      best = i;
      bestDist = d;
    }
  });
  return best;
}
