/** Deterministic force-directed graph layout.
 *
 * Seeded start positions plus a fixed number of spring/repulsion rounds:
 * the same map always lands in the same picture, so screenshots and tests
 * are reproducible.
 */

export interface NodePosition {
  id: string;
  x: number;
  y: number;
}

/** mulberry32: tiny seeded PRNG, good enough for layout jitter. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function forceLayout(
  ids: string[],
  edges: { source: string; target: string }[],
  width: number,
  height: number,
  seed = 42,
  iterations = 250,
): NodePosition[] {
  const n = ids.length;
  if (n === 0) return [];
  const rand = mulberry32(seed);
  const index = new Map(ids.map((id, i) => [id, i]));
  const cx = width / 2;
  const cy = height / 2;
  const ring = Math.min(width, height) * 0.33;
  const xs = new Float64Array(n);
  const ys = new Float64Array(n);
  for (let i = 0; i < n; i++) {
    const angle = (2 * Math.PI * i) / n;
    xs[i] = cx + ring * Math.cos(angle) + (rand() - 0.5) * 10;
    ys[i] = cy + ring * Math.sin(angle) + (rand() - 0.5) * 10;
  }
  const pairs = edges
    .map((e) => [index.get(e.source), index.get(e.target)] as const)
    .filter(([a, b]) => a !== undefined && b !== undefined && a !== b) as [number, number][];

  const spring = ring * 0.9;
  const repulsion = spring * spring * 0.35;
  for (let round = 0; round < iterations; round++) {
    const cool = 1 - round / iterations;
    const fx = new Float64Array(n);
    const fy = new Float64Array(n);
    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        let dx = xs[i] - xs[j];
        let dy = ys[i] - ys[j];
        let d2 = dx * dx + dy * dy;
        if (d2 < 1e-6) {
          dx = rand() - 0.5;
          dy = rand() - 0.5;
          d2 = dx * dx + dy * dy;
        }
        const push = repulsion / d2;
        fx[i] += dx * push;
        fy[i] += dy * push;
        fx[j] -= dx * push;
        fy[j] -= dy * push;
      }
    }
    for (const [a, b] of pairs) {
      const dx = xs[b] - xs[a];
      const dy = ys[b] - ys[a];
      const dist = Math.sqrt(dx * dx + dy * dy) || 1;
      const pull = (dist - spring) * 0.02;
      fx[a] += (dx / dist) * pull * dist;
      fy[a] += (dy / dist) * pull * dist;
      fx[b] -= (dx / dist) * pull * dist;
      fy[b] -= (dy / dist) * pull * dist;
    }
    for (let i = 0; i < n; i++) {
      fx[i] += (cx - xs[i]) * 0.01;
      fy[i] += (cy - ys[i]) * 0.01;
      const step = Math.min(8 * cool + 0.5, Math.hypot(fx[i], fy[i]));
      const mag = Math.hypot(fx[i], fy[i]) || 1;
      xs[i] += (fx[i] / mag) * step;
      ys[i] += (fy[i] / mag) * step;
      const margin = 24;
      xs[i] = Math.max(margin, Math.min(width - margin, xs[i]));
      ys[i] = Math.max(margin, Math.min(height - margin, ys[i]));
    }
  }
  return ids.map((id, i) => ({ id, x: xs[i], y: ys[i] }));
}
