import { describe, expect, it } from "vitest";

import type { Vec3 } from "../src/api.js";
import { basis, defaultCamera, pickVertex, project, rotated,
         screenDeltaToWorld, zoomed } from "../src/camera.js";

const dot = (a: Vec3, b: Vec3) => a[0] * b[0] + a[1] * b[1] + a[2] * b[2];

describe("camera basis", () => {
  it("is orthonormal for arbitrary orientations", () => {
    for (const yaw of [0, 0.6, 2.2, -1.1]) {
      for (const pitch of [0, 0.4, -1.2]) {
        const { right, up, forward } = basis({ ...defaultCamera(), yaw, pitch });
        for (const v of [right, up, forward]) {
          expect(dot(v, v)).toBeCloseTo(1, 12);
        }
        expect(dot(right, up)).toBeCloseTo(0, 12);
        expect(dot(right, forward)).toBeCloseTo(0, 12);
        expect(dot(up, forward)).toBeCloseTo(0, 12);
      }
    }
  });
});

describe("projection and drag plane", () => {
  it("screenDeltaToWorld inverts project within the camera plane", () => {
    const cam = { ...defaultCamera(), yaw: 0.9, pitch: -0.3, zoom: 37 };
    const p: Vec3 = [1.5, -2.0, 0.75];
    const before = project(cam, 800, 600, p);
    const delta = screenDeltaToWorld(cam, 13, -8);
    const moved: Vec3 = [p[0] + delta[0], p[1] + delta[1], p[2] + delta[2]];
    const after = project(cam, 800, 600, moved);
    expect(after.x - before.x).toBeCloseTo(13, 9);
    expect(after.y - before.y).toBeCloseTo(-8, 9);
    expect(after.depth).toBeCloseTo(before.depth, 9); // stays in the camera plane
  });

  it("camera manipulation never mutates geometry inputs", () => {
    const p: Vec3 = [1, 2, 3];
    const cam = defaultCamera();
    project(cam, 640, 480, p);
    rotated(cam, 0.3, 0.1);
    zoomed(cam, 2.0);
    screenDeltaToWorld(cam, 5, 5);
    expect(p).toEqual([1, 2, 3]);
    expect(cam).toEqual(defaultCamera()); // rotated/zoomed return copies
  });

  it("pitch stays clamped away from the poles", () => {
    let cam = defaultCamera();
    for (let i = 0; i < 100; i++) cam = rotated(cam, 0, 0.5);
    expect(Math.abs(cam.pitch)).toBeLessThan(Math.PI / 2);
  });
});

describe("vertex picking", () => {
  it("selects the nearest handle within the radius, else null", () => {
    const cam = { ...defaultCamera(), yaw: 0, pitch: 0, zoom: 10, center: [0, 0, 0] as Vec3 };
    const pts: Vec3[] = [[0, 0, 0], [2, 0, 0], [0, 0, 2]];
    const origin = project(cam, 400, 400, pts[0]);
    expect(pickVertex(cam, 400, 400, pts, origin.x + 3, origin.y)).toBe(0);
    const second = project(cam, 400, 400, pts[1]);
    expect(pickVertex(cam, 400, 400, pts, second.x - 2, second.y + 2)).toBe(1);
    expect(pickVertex(cam, 400, 400, pts, origin.x + 200, origin.y + 200)).toBeNull();
  });
});
