// Single switch for pointing the client at a server. Served from the game
// server under /ui/ the empty default means same-origin; a separate static
// host sets window.ARCHIGUESSER_API_BASE before loading the bundle.

declare global {
  interface Window {
    ARCHIGUESSER_API_BASE?: string;
  }
}

export function apiBase(): string {
  if (typeof window !== "undefined" && window.ARCHIGUESSER_API_BASE) {
    return window.ARCHIGUESSER_API_BASE.replace(/\/+$/, "");
  }
  return "";
}

/** ws:// or wss:// prefix matching the API base (or the page origin). */
export function wsBase(): string {
  const base = apiBase();
  if (base) return base.replace(/^http/, "ws");
  if (typeof location !== "undefined") {
    const scheme = location.protocol === "https:" ? "wss:" : "ws:";
    return `${scheme}//${location.host}`;
  }
  return "";
}
