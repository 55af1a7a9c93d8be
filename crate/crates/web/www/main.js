import init, { transform, solve, identity } from "./pkg/lapseq_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function show(out, run) {
  try {
    out.className = "";
    out.textContent = JSON.stringify(JSON.parse(run()), null, 2);
  } catch (e) {
    out.className = "err";
    out.textContent = String(e);
  }
}

await init();

$("t-go").onclick = () =>
  show($("t-out"), () => transform($("t-fn").value, num("t-a"), num("t-s"), num("t-n")));
$("d-go").onclick = () =>
  show($("d-out"), () => solve($("d-coeffs").value, $("d-init").value, num("d-n")));
$("i-go").onclick = () =>
  show($("i-out"), () => identity($("i-which").value, num("i-max")));
