import init, { classify, deform, pipeline } from "./pkg/a4lift_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function show(text) {
  const reply = JSON.parse(text);
  const status = $("status");
  if (!reply.ok) {
    status.className = "fail";
    status.textContent = `error (exit ${reply.exit_code}): ${reply.error}`;
    $("out").textContent = "";
    return;
  }
  const r = reply.result;
  const pass = r.verdict ? r.verdict.pass : r.pass;
  status.className = pass === false ? "fail" : "pass";
  status.textContent = pass === undefined ? "ok" : pass ? "all checks pass" : "some check failed";
  $("out").textContent = JSON.stringify(r, null, 2);
}

await init();

$("classify").onclick = () => show(classify($("rep").value, num("n")));
$("deform").onclick = () => show(deform($("rep").value, num("n"), num("P"), $("mu").value));
$("pipeline").onclick = () =>
  show(pipeline($("rep").value, num("n"), num("P"), num("N"), num("e"), $("mu").value));
