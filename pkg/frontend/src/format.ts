// Fixed-precision formatting for everything the panel displays.
// The consistency tests compare these strings against raw API fields,
// so rendering must never do arithmetic beyond formatting.

export function formatRangeM(value: number | null): string {
    return value === null ? "n/a" : value.toFixed(1);
}

export function formatMarginDb(value: number): string {
    return value.toFixed(1);
}

export function formatDbm(value: number): string {
    return value.toFixed(1);
}

export function formatDensity(value: number | null): string {
    return value === null ? "n/a" : String(value);
}

export function formatCount(value: number): string {
    return String(value);
}

export function formatDistanceM(value: number): string {
    return value.toFixed(1);
}
