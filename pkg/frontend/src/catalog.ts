/** Catalog model: block palette grouped the way the filter families ship. */

import type { BlockSpec, CatalogDoc, ParamSpec } from "./types.js";

export const GROUP_LABELS: Record<string, string> = {
  pixel: "Pixel operations",
  advanced: "Advanced filters",
  histogram: "Histogram",
};

export interface PaletteEntry {
  kind: string;
  known: boolean; // unknown kinds render disabled instead of crashing
  spec: BlockSpec | null;
}

export interface PaletteGroup {
  group: string;
  label: string;
  entries: PaletteEntry[];
}

export class Catalog {
  readonly specs = new Map<string, BlockSpec>();
  private order: string[] = [];

  constructor(doc: CatalogDoc) {
    for (const spec of doc.filters ?? []) {
      if (typeof spec.kind !== "string") continue;
      this.specs.set(spec.kind, spec);
      this.order.push(spec.kind);
    }
  }

  get kinds(): string[] {
    return [...this.order];
  }

  spec(kind: string): BlockSpec | null {
    return this.specs.get(kind) ?? null;
  }

  params(kind: string): ParamSpec[] {
    return this.spec(kind)?.params ?? [];
  }

  defaults(kind: string): Record<string, number> {
    const out: Record<string, number> = {};
    for (const p of this.params(kind)) out[p.name] = p.default;
    return out;
  }

  /** Palette rows grouped by family; entries the client cannot interpret
   * (missing group or malformed params) are flagged, not dropped. */
  palette(): PaletteGroup[] {
    const groups = new Map<string, PaletteEntry[]>();
    for (const kind of this.order) {
      const spec = this.specs.get(kind)!;
      const known = typeof spec.group === "string" && Array.isArray(spec.params);
      const group = known && GROUP_LABELS[spec.group] ? spec.group : "other";
      if (!groups.has(group)) groups.set(group, []);
      groups.get(group)!.push({ kind, known: known && group !== "other", spec });
    }
    return [...groups.entries()].map(([group, entries]) => ({
      group,
      label: GROUP_LABELS[group] ?? "Other",
      entries,
    }));
  }
}
