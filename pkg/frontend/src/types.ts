/** Shared wire and editor types. */

export interface ParamSpec {
  name: string;
  min: number;
  max: number;
  default: number;
  step: number;
}

export interface BlockSpec {
  kind: string;
  group: string;
  requires_channels: number | null;
  output_channels: number | "same" | "halftone";
  params: ParamSpec[];
}

export interface CatalogDoc {
  schema_version: number;
  filters: BlockSpec[];
}

export interface Block {
  kind: string;
  params: Record<string, number>;
}

export interface StyleDocument {
  schema_version: number;
  name: string;
  line_color: [number, number, number];
  background: Block[];
  foreground?: Block[] | null;
}

export type Layer = "background" | "foreground";

export interface StyleInfo {
  name: string;
  version: number;
}

export interface StoryboardPage {
  layout_id: string;
  style_name: string;
  page_ref: string;
}
