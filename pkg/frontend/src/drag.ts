/**
 * Drag controller: optimistic vertex moves in the camera-parallel plane,
 * reconciled against the server acknowledgment.
 *
 * The server owns every topology verdict.  After each acknowledged move the
 * local polygon is replaced by the server's copy (round-trip invariant) and
 * the simplicity badge reflects exactly the server's quick analysis.  A
 * rejected move restores the pre-drag geometry.
 */
import type { QuickAnalysis, SessionClient, SessionSnapshot, Vec3 } from "./api.js";
import type { Camera } from "./camera.js";
import { screenDeltaToWorld } from "./camera.js";

export interface DragOutcome {
  accepted: boolean;
  snapshot: SessionSnapshot;
  badgeFlipped: boolean;
}

export class DragController {
  private snapshot: SessionSnapshot;
  private quick: QuickAnalysis | null;

  constructor(private readonly client: SessionClient, initial: SessionSnapshot) {
    this.snapshot = initial;
    this.quick = initial.quick ?? null;
  }

  get current(): SessionSnapshot {
    return this.snapshot;
  }

  get polygon(): Vec3[] {
    return this.snapshot.polygon.points;
  }

  get simpleBadge(): boolean | null {
    return this.quick ? this.quick.simple : null;
  }

  get version(): number {
    return this.snapshot.version;
  }

  /** Apply a screen-space drag to vertex `index`; zero deltas are no-ops. */
  async dragVertex(index: number, camera: Camera, dx: number, dy: number): Promise<DragOutcome> {
    if (dx === 0 && dy === 0) {
      return { accepted: true, snapshot: this.snapshot, badgeFlipped: false };
    }
    const before = this.snapshot;
    const badgeBefore = this.quick?.simple ?? null;
    const delta = screenDeltaToWorld(camera, dx, dy);
    const p = before.polygon.points[index];
    const target: Vec3 = [p[0] + delta[0], p[1] + delta[1], p[2] + delta[2]];
    try {
      const ack = await this.client.moveVertex(before.id, index, target);
      this.snapshot = ack;
      this.quick = ack.quick ?? null;
      const badgeAfter = this.quick?.simple ?? null;
      return {
        accepted: true,
        snapshot: ack,
        badgeFlipped: badgeBefore !== null && badgeAfter !== null && badgeBefore !== badgeAfter,
      };
    } catch (error) {
      // server rejection: revert the handle to the acknowledged state
      const fresh = await this.client.getPolygon(before.id);
      this.snapshot = fresh;
      this.quick = fresh.quick ?? this.quick;
      return { accepted: false, snapshot: fresh, badgeFlipped: false };
    }
  }

  /** Exact-coordinate entry fallback (the numeric panel). */
  async setVertex(index: number, point: Vec3): Promise<DragOutcome> {
    const badgeBefore = this.quick?.simple ?? null;
    const ack = await this.client.moveVertex(this.snapshot.id, index, point);
    this.snapshot = ack;
    this.quick = ack.quick ?? null;
    const badgeAfter = this.quick?.simple ?? null;
    return {
      accepted: true,
      snapshot: ack,
      badgeFlipped: badgeBefore !== null && badgeAfter !== null && badgeBefore !== badgeAfter,
    };
  }

  /** Server state wins whenever an event or refetch delivers a newer copy. */
  absorb(snapshot: SessionSnapshot, quick?: QuickAnalysis): void {
    if (snapshot.version >= this.snapshot.version) {
      this.snapshot = snapshot;
      if (quick) this.quick = quick;
      else if (snapshot.quick) this.quick = snapshot.quick;
    }
  }

  absorbQuick(version: number, quick: QuickAnalysis): void {
    if (version >= this.snapshot.version) this.quick = quick;
  }
}
