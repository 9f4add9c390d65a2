/** Client-side mirror of the server's chain rules, so the editor can flag
 * broken chains inline before a request ever leaves the browser. */

import type { Catalog } from "./catalog.js";
import type { Block } from "./types.js";

function outputChannels(catalog: Catalog, block: Block, inChannels: number): number {
  const spec = catalog.spec(block.kind);
  if (!spec) return inChannels;
  const rule = spec.output_channels;
  if (rule === "same") return inChannels;
  if (rule === "halftone") return (block.params["cmyk"] ?? 0) >= 1 ? 3 : 1;
  return rule as number;
}

export function validateChain(
  catalog: Catalog,
  blocks: Block[],
  chain: string,
  mustEndSingleChannel: boolean,
): string[] {
  const errors: string[] = [];
  let channels = 3;
  let grayStack = 0;
  blocks.forEach((block, i) => {
    const spec = catalog.spec(block.kind);
    if (!spec) {
      errors.push(`${chain}[${i}]: unknown filter kind '${block.kind}'`);
      return;
    }
    for (const p of spec.params) {
      const value = block.params[p.name];
      if (value !== undefined && (value < p.min || value > p.max)) {
        errors.push(`${chain}[${i}]: ${block.kind}.${p.name}=${value} outside [${p.min}, ${p.max}]`);
      }
    }
    if (block.kind === "ToColor" && grayStack === 0) {
      errors.push(`${chain}[${i}]: ToColor without prior ToGray`);
      channels = 3;
      return;
    }
    if (spec.requires_channels !== null && channels !== spec.requires_channels) {
      errors.push(
        `${chain}[${i}]: ${block.kind} needs ${spec.requires_channels}-channel input, chain carries ${channels}`,
      );
    }
    if (block.kind === "ToGray") grayStack += 1;
    else if (block.kind === "ToColor") grayStack -= 1;
    channels = outputChannels(catalog, block, spec.requires_channels ?? channels);
  });
  if (mustEndSingleChannel && channels !== 1) {
    errors.push(`${chain}: foreground chain must end single-channel, ends with ${channels}`);
  }
  return errors;
}

export function validateStyle(
  catalog: Catalog,
  background: Block[],
  foreground: Block[] | null,
): string[] {
  const errors = validateChain(catalog, background, "background", false);
  if (foreground !== null) {
    errors.push(...validateChain(catalog, foreground, "foreground", true));
  }
  return errors;
}
