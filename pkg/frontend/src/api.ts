/**
 * Typed client for the cldmaps analysis service.
 *
 * The UI never computes anything itself: every number it shows comes
 * verbatim from one of these responses.
 */

export interface ImageStats {
  mean_brightness: number;
  max_abs_deviation: number;
  tau_max: number;
}

export interface UploadResponse {
  session_id: string;
  width: number;
  height: number;
  stats: ImageStats;
}

export interface CurvePoint {
  tau: number;
  omega: number;
  Omega: number;
  Pi: number;
}

export interface OptimizeResponse {
  tau0_percent: number;
  pi_at_tau0: number;
  curve: CurvePoint[];
}

export interface CoverageRow {
  alpha: number;
  tau_prime: number | null;
  reachable: boolean;
}

export interface CoverageTable {
  k: number;
  attainable_max: number;
  entries: CoverageRow[];
}

export interface DefectRow {
  alpha: number;
  tau: number;
}

export interface DefectTable {
  T_doubleprime: number;
  alpha_max: number;
  k: number;
  r: number;
  j_max: number;
  delta: number;
  entries: DefectRow[];
}

export interface Tables {
  /** Null when no pixel is supported at this threshold. */
  h_prime: CoverageTable | null;
  /** Null when no pixel is defective at any threshold. */
  h_doubleprime: DefectTable | null;
}

/** A rendered map image plus the resolved threshold it was made with. */
export interface MapImage {
  url: string;
  tauPercent: number | null;
  rowPercent: number | null;
  greenFraction: number | null;
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

async function raiseForStatus(res: Response): Promise<void> {
  if (res.ok) return;
  let detail = `${res.status}`;
  try {
    const body = (await res.json()) as { detail?: unknown };
    if (typeof body.detail === "string") detail = body.detail;
  } catch {
    /* non-JSON error body */
  }
  throw new ApiError(res.status, detail);
}

function headerNumber(res: Response, name: string): number | null {
  const raw = res.headers.get(name);
  return raw === null ? null : Number(raw);
}

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
    private readonly toUrl: (blob: Blob) => string = (b) => URL.createObjectURL(b),
  ) {}

  private url(path: string, params?: Record<string, number | string>): string {
    const u = new URL(path, this.baseUrl);
    if (params) {
      for (const [key, value] of Object.entries(params)) {
        u.searchParams.set(key, String(value));
      }
    }
    return u.toString();
  }

  async uploadImage(file: Blob, name = "image.png"): Promise<UploadResponse> {
    const form = new FormData();
    form.append("file", file, name);
    const res = await this.fetchFn(this.url("/images"), {
      method: "POST",
      body: form,
    });
    await raiseForStatus(res);
    return (await res.json()) as UploadResponse;
  }

  async optimize(sessionId: string, grid = 64): Promise<OptimizeResponse> {
    const res = await this.fetchFn(
      this.url(`/sessions/${sessionId}/optimize`, { grid }),
      { method: "POST" },
    );
    await raiseForStatus(res);
    return (await res.json()) as OptimizeResponse;
  }

  async tables(sessionId: string, tauPercent: number, k = 10): Promise<Tables> {
    const res = await this.fetchFn(
      this.url(`/sessions/${sessionId}/tables`, { tau: tauPercent, k }),
    );
    await raiseForStatus(res);
    return (await res.json()) as Tables;
  }

  smapUrl(sessionId: string, tauPercent: number): string {
    return this.url(`/sessions/${sessionId}/smap`, { tau: tauPercent });
  }

  async fetchSmap(sessionId: string, tauPercent: number): Promise<string> {
    const res = await this.fetchFn(this.smapUrl(sessionId, tauPercent));
    await raiseForStatus(res);
    return this.toUrl(await res.blob());
  }

  async fetchDmap(
    sessionId: string,
    tauPercent: number,
    coveragePercent: number,
    k = 10,
  ): Promise<MapImage> {
    const res = await this.fetchFn(
      this.url(`/sessions/${sessionId}/dmap`, {
        tau: tauPercent,
        coverage: coveragePercent,
        k,
      }),
    );
    await raiseForStatus(res);
    const blob = await res.blob();
    return {
      url: this.toUrl(blob),
      tauPercent: headerNumber(res, "X-Tau-Prime-Percent"),
      rowPercent: headerNumber(res, "X-Row-Coverage-Percent"),
      greenFraction: headerNumber(res, "X-Green-Fraction"),
    };
  }

  async fetchDdmap(
    sessionId: string,
    tauPercent: number,
    defectPercent: number,
    k = 10,
  ): Promise<MapImage> {
    const res = await this.fetchFn(
      this.url(`/sessions/${sessionId}/ddmap`, {
        tau: tauPercent,
        defect_pct: defectPercent,
        k,
      }),
    );
    await raiseForStatus(res);
    const blob = await res.blob();
    return {
      url: this.toUrl(blob),
      tauPercent: headerNumber(res, "X-Tau-Dprime-Percent"),
      rowPercent: headerNumber(res, "X-Row-Defect-Percent"),
      greenFraction: null,
    };
  }
}
