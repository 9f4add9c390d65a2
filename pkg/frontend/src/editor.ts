/** Editor state: two filter chains plus selection, with change notification.
 * Every mutation bumps an edit counter the preview scheduler keys off. */

import type { Catalog } from "./catalog.js";
import { validateStyle } from "./validation.js";
import type { Block, Layer, StyleDocument } from "./types.js";

export class EditorState {
  background: Block[] = [];
  foreground: Block[] | null = null;
  activeLayer: Layer = "background";
  selected = -1;
  styleName = "untitled";
  lineColor: [number, number, number] = [0, 0, 0];
  dirty = false;
  private listeners: Array<() => void> = [];

  constructor(private catalog: Catalog) {}

  onChange(fn: () => void): void {
    this.listeners.push(fn);
  }

  private emit(): void {
    this.dirty = true;
    for (const fn of this.listeners) fn();
  }

  chain(layer: Layer = this.activeLayer): Block[] {
    if (layer === "background") return this.background;
    if (this.foreground === null) this.foreground = [];
    return this.foreground;
  }

  setLayer(layer: Layer): void {
    this.activeLayer = layer;
    this.selected = -1;
    for (const fn of this.listeners) fn();
  }

  addBlock(kind: string, index?: number): void {
    const block: Block = { kind, params: this.catalog.defaults(kind) };
    const chain = this.chain();
    const at = index ?? chain.length;
    chain.splice(at, 0, block);
    this.selected = at;
    this.emit();
  }

  removeBlock(index: number): void {
    const chain = this.chain();
    if (index < 0 || index >= chain.length) return;
    chain.splice(index, 1);
    if (this.activeLayer === "foreground" && chain.length === 0) this.foreground = null;
    this.selected = Math.min(this.selected, chain.length - 1);
    this.emit();
  }

  moveBlock(from: number, to: number): void {
    const chain = this.chain();
    if (from < 0 || from >= chain.length || to < 0 || to >= chain.length || from === to) return;
    const [block] = chain.splice(from, 1);
    chain.splice(to, 0, block);
    this.selected = to;
    this.emit();
  }

  setParam(index: number, name: string, value: number): void {
    const chain = this.chain();
    const block = chain[index];
    if (!block) return;
    block.params[name] = value;
    this.emit();
  }

  validationErrors(): string[] {
    return validateStyle(this.catalog, this.background, this.foreground);
  }

  toDocument(): StyleDocument {
    const doc: StyleDocument = {
      schema_version: 1,
      name: this.styleName,
      line_color: [...this.lineColor] as [number, number, number],
      background: this.background.map((b) => ({ kind: b.kind, params: { ...b.params } })),
    };
    if (this.foreground !== null && this.foreground.length > 0) {
      doc.foreground = this.foreground.map((b) => ({ kind: b.kind, params: { ...b.params } }));
    }
    return doc;
  }

  loadDocument(doc: StyleDocument): void {
    this.styleName = doc.name ?? "untitled";
    this.lineColor = [...(doc.line_color ?? [0, 0, 0])] as [number, number, number];
    this.background = (doc.background ?? []).map((b) => ({
      kind: b.kind,
      params: { ...this.catalog.defaults(b.kind), ...b.params },
    }));
    this.foreground = doc.foreground
      ? doc.foreground.map((b) => ({
          kind: b.kind,
          params: { ...this.catalog.defaults(b.kind), ...b.params },
        }))
      : null;
    this.activeLayer = "background";
    this.selected = -1;
    this.dirty = false;
    for (const fn of this.listeners) fn();
  }
}
