/** View-side state: display toggles, selection, badges — never geometry. */
import type { Camera } from "./camera.js";
import { defaultCamera } from "./camera.js";
import type { QuickAnalysis, SessionSnapshot, Vec3 } from "./api.js";

export interface Toggles {
  polygon: boolean;
  curve: boolean;
  subdivision: boolean;
  crossings: boolean;
}

export interface ViewState {
  camera: Camera;
  toggles: Toggles;
  selectedVertex: number | null;
  sessionId: string | null;
  subdivisionDepth: number;
  subdivisionU: number;
}

export const initialViewState = (): ViewState => ({
  camera: defaultCamera(),
  toggles: { polygon: true, curve: true, subdivision: false, crossings: true },
  selectedVertex: null,
  sessionId: null,
  subdivisionDepth: 1,
  subdivisionU: 0.5,
});

export interface CrossingMarker {
  point: Vec3;
  label: string;
}

/** Everything the renderer needs for one frame, assembled from server data. */
export interface SceneData {
  snapshot: SessionSnapshot | null;
  curveSamples: Vec3[];
  subdivisionNets: Vec3[][];
  crossingMarkers: CrossingMarker[];
  quick: QuickAnalysis | null;
}

export const emptyScene = (): SceneData => ({
  snapshot: null,
  curveSamples: [],
  subdivisionNets: [],
  crossingMarkers: [],
  quick: null,
});

/**
 * Extract witness markers from a completed analysis: planar crossing pairs
 * from the "knot" check (located on the curve via the sample array) and the
 * self-intersection witness point from the "selfx" check.
 */
export function markersFromAnalysis(result: Record<string, unknown>,
                                    samples: Vec3[]): CrossingMarker[] {
  const markers: CrossingMarker[] = [];
  const checks = result["checks"] as Record<string, unknown> | undefined;
  const knot = checks?.["knot"] as { planar_pairs?: [number, number, number][] } | undefined;
  if (knot?.planar_pairs && samples.length > 1) {
    knot.planar_pairs.forEach(([t1, t2], i) => {
      const at = samples[Math.round(t1 * (samples.length - 1))];
      markers.push({ point: at, label: `crossing ${i + 1} (${t1.toFixed(3)}, ${t2.toFixed(3)})` });
    });
  }
  const selfx = checks?.["selfx"] as
    | { witness?: { s: number; t: number; residual: number; point_a: Vec3 } }
    | undefined;
  if (selfx?.witness) {
    const w = selfx.witness;
    markers.push({
      point: w.point_a,
      label: `witness (${w.s.toFixed(3)}, ${w.t.toFixed(3)}) residual ${w.residual.toExponential(1)}`,
    });
  }
  return markers;
}
