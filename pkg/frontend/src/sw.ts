// Service worker: caches the app shell so the page itself loads offline.
// (Remedy content is persisted separately by the KB cache; API calls are
// never served from here.)

declare const self: ServiceWorkerGlobalScope;

const CACHE_NAME = "tomatodet-shell-v1";
const SHELL = ["./", "./index.html", "./styles.css", "./dist/app.js"];

self.addEventListener("install", (event: ExtendableEvent) => {
  event.waitUntil(caches.open(CACHE_NAME).then((cache) => cache.addAll(SHELL)));
});

self.addEventListener("activate", (event: ExtendableEvent) => {
  event.waitUntil(
    caches.keys().then((names) =>
      Promise.all(names.filter((name) => name !== CACHE_NAME).map((name) => caches.delete(name))),
    ),
  );
});

async function respond(request: Request): Promise<Response> {
  const cached = await caches.match(request);
  const network = fetch(request)
    .then(async (response) => {
      const clone = response.clone();
      const cache = await caches.open(CACHE_NAME);
      await cache.put(request, clone);
      return response;
    })
    .catch(() => cached ?? Response.error());
  return cached ?? network;
}

self.addEventListener("fetch", (event: FetchEvent) => {
  const url = new URL(event.request.url);
  if (event.request.method !== "GET" || url.pathname.startsWith("/api/")) {
    return; // API traffic goes straight to the network
  }
  event.respondWith(respond(event.request));
});

export {};
