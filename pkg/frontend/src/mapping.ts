/** Column-mapping proposal handling and user overrides. */

import { ROLES, type Role, type RoleBinding } from "./types.js";

export type Mapping = Record<Role, RoleBinding>;

/** Re-bind one role; binding a column already used elsewhere unbinds the
 * other role (a column can never serve two roles). */
export function applyOverride(
  mapping: Mapping,
  role: Role,
  column: string | null,
  availableColumns: string[],
): Mapping {
  if (column !== null && !availableColumns.includes(column)) {
    throw new Error(`unknown column: ${column}`);
  }
  const next = { ...mapping };
  if (column !== null) {
    for (const other of ROLES) {
      if (other !== role && next[other].column === column) {
        next[other] = { column: null, provenance: "none" };
      }
    }
  }
  next[role] = column === null ? { column: null, provenance: "none" } : { column, provenance: "manual" };
  return next;
}

export function isEdited(mapping: Mapping): boolean {
  return ROLES.some((role) => mapping[role].provenance === "manual");
}

/** Request payload for /run: only bound roles, only when the user edited. */
export function mappingPayload(mapping: Mapping): Record<string, string> | undefined {
  if (!isEdited(mapping)) return undefined;
  const payload: Record<string, string> = {};
  for (const role of ROLES) {
    const column = mapping[role].column;
    if (column !== null) payload[role] = column;
  }
  return payload;
}
