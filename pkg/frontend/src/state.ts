/**
 * Session state machine for the what-if loop: upload, tune, then move
 * the coverage / defect sliders while the maps refresh.  Stale
 * responses are dropped: only the latest request per control may
 * update the view.
 */

import {
  ApiClient,
  ApiError,
  type MapImage,
  type OptimizeResponse,
  type Tables,
  type UploadResponse,
} from "./api.js";
import { coverageStops, defectStops, nearestStop, type SliderStop } from "./tables.js";

export type Phase = "idle" | "uploading" | "ready" | "optimizing" | "optimized";

export interface UiSessionState {
  phase: Phase;
  error: string | null;
  sessionId: string | null;
  width: number;
  height: number;
  stats: UploadResponse["stats"] | null;
  tauPercent: number | null; // tuned saturation threshold, percent
  curve: OptimizeResponse["curve"] | null;
  piAtTau: number | null;
  tables: Tables | null;
  smapUrl: string | null;
  coverage: SliderStop | null;
  dmap: MapImage | null;
  defect: SliderStop | null;
  ddmap: MapImage | null;
}

function initialState(): UiSessionState {
  return {
    phase: "idle",
    error: null,
    sessionId: null,
    width: 0,
    height: 0,
    stats: null,
    tauPercent: null,
    curve: null,
    piAtTau: null,
    tables: null,
    smapUrl: null,
    coverage: null,
    dmap: null,
    defect: null,
    ddmap: null,
  };
}

export class SessionController {
  state: UiSessionState = initialState();
  onChange: ((state: UiSessionState) => void) | null = null;

  private coverageRequest = 0;
  private defectRequest = 0;

  constructor(private readonly api: ApiClient) {}

  private emit(patch: Partial<UiSessionState>): void {
    this.state = { ...this.state, ...patch };
    this.onChange?.(this.state);
  }

  private fail(err: unknown): void {
    const message =
      err instanceof ApiError
        ? err.message
        : err instanceof Error
          ? `request failed: ${err.message}`
          : "request failed";
    this.emit({ phase: this.state.sessionId ? "ready" : "idle", error: message });
  }

  async upload(file: Blob, name?: string): Promise<void> {
    this.state = initialState();
    this.emit({ phase: "uploading" });
    try {
      const res = await this.api.uploadImage(file, name);
      this.emit({
        phase: "ready",
        error: null,
        sessionId: res.session_id,
        width: res.width,
        height: res.height,
        stats: res.stats,
      });
    } catch (err) {
      this.fail(err);
    }
  }

  async optimize(grid = 64): Promise<void> {
    const sessionId = this.state.sessionId;
    if (!sessionId) return;
    this.emit({ phase: "optimizing", error: null });
    try {
      const res = await this.api.optimize(sessionId, grid);
      const tables = await this.api.tables(sessionId, res.tau0_percent);
      const smapUrl = await this.api.fetchSmap(sessionId, res.tau0_percent);
      this.emit({
        phase: "optimized",
        tauPercent: res.tau0_percent,
        curve: res.curve,
        piAtTau: res.pi_at_tau0,
        tables,
        smapUrl,
      });
    } catch (err) {
      this.fail(err);
    }
  }

  /** Stops the coverage slider may take (reachable table rows). */
  coverageStops(): SliderStop[] {
    const table = this.state.tables?.h_prime;
    return table ? coverageStops(table) : [];
  }

  defectStops(): SliderStop[] {
    const table = this.state.tables?.h_doubleprime;
    return table ? defectStops(table) : [];
  }

  async setCoverage(rawPercent: number): Promise<void> {
    const { sessionId, tauPercent } = this.state;
    if (!sessionId || tauPercent === null) return;
    const stops = this.coverageStops();
    if (stops.length === 0) return;
    const stop = nearestStop(stops, rawPercent);
    const token = ++this.coverageRequest;
    this.emit({ coverage: stop });
    try {
      const dmap = await this.api.fetchDmap(sessionId, tauPercent, stop.percent);
      if (token !== this.coverageRequest) return; // stale response
      this.emit({ dmap, error: null });
    } catch (err) {
      if (token !== this.coverageRequest) return;
      this.fail(err);
    }
  }

  async setDefect(rawPercent: number): Promise<void> {
    const { sessionId, tauPercent } = this.state;
    if (!sessionId || tauPercent === null) return;
    const stops = this.defectStops();
    if (stops.length === 0) return;
    const stop = nearestStop(stops, rawPercent);
    const token = ++this.defectRequest;
    this.emit({ defect: stop });
    try {
      const ddmap = await this.api.fetchDdmap(sessionId, tauPercent, stop.percent);
      if (token !== this.defectRequest) return;
      this.emit({ ddmap, error: null });
    } catch (err) {
      if (token !== this.defectRequest) return;
      this.fail(err);
    }
  }
}
