import json

import pytest

from glp.algebra import canonicalString, parseCanonical
from glp.cli import main
from glp import verify as verifymod

FORK5 = {'vertices': 5, 'edges': [[1, 2], [2, 3], [3, 4], [3, 5]]}
LOOP6 = {'vertices': 6,
         'edges': [[1, 2], [1, 3], [2, 4], [3, 4], [3, 5], [4, 6], [5, 6]]}
BUSH8 = {'vertices': 8,
         'edges': [[1, 2], [2, 3], [2, 4], [2, 5], [4, 6], [4, 7], [5, 8]],
         'root': 1}
TWO_PATH = {'vertices': 2, 'edges': [[1, 2]], 'root': 1}


def doc(tmp_path, payload, name='g.json'):
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return str(p)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_ydet_golden(tmp_path, capsys):
    code, out, err = run(capsys, [
        'ydet', '--tree', doc(tmp_path, FORK5), '--set', '3,5'])
    want = canonicalString(parseCanonical(
        '(A3*A5 + A5*X2 + A5*X4 + A5*X5 + A3*X3 + X2*X3 + X3*X4)/(X3*X5)'))
    assert code == 0
    assert out == want + '\n'
    assert err == ''


def test_ppoly_golden(tmp_path, capsys):
    code, out, _ = run(capsys, [
        'ppoly', '--tree', doc(tmp_path, LOOP6), '--set', '1,2,3,4',
        '--i', '6', '--j', '3'])
    assert code == 0
    assert out == 'Y{1,2} + 1\n'


def test_cluster_listing(tmp_path, capsys):
    code, out, _ = run(capsys, [
        'cluster', '--tree', doc(tmp_path, BUSH8)])
    assert code == 0
    assert out.splitlines() == [
        'root=1',
        '1: Y{1,2,3,4,5,6,7,8}',
        '2: Y{2,3,4,5,6,7,8}',
        '3: Y{3}',
        '4: Y{4,6,7}',
        '5: Y{5,8}',
        '6: Y{6}',
        '7: Y{7}',
        '8: Y{8}',
    ]


def test_cluster_root_override(tmp_path, capsys):
    code, out, _ = run(capsys, [
        'cluster', '--tree', doc(tmp_path, TWO_PATH), '--root', '2'])
    assert code == 0
    assert out.splitlines() == ['root=2', '1: Y{1}', '2: Y{1,2}']


def test_expand_set(tmp_path, capsys):
    code, out, _ = run(capsys, [
        'expand', '--tree', doc(tmp_path, TWO_PATH), '--set', '1'])
    assert code == 0
    assert out == '(Y{1,2} + 1)/(Y{2})\n'


def test_expand_x(tmp_path, capsys):
    code, out, _ = run(capsys, [
        'expand', '--tree', doc(tmp_path, TWO_PATH), '--x', '2'])
    assert code == 0
    assert out == '(A1*Y{2} + A2*Y{1,2} + A2)/(Y{1,2}*Y{2})\n'


def test_expand_x_with_root_override(tmp_path, capsys):
    code, out, _ = run(capsys, [
        'expand', '--tree', doc(tmp_path, TWO_PATH), '--x', '1',
        '--root', '2'])
    assert code == 0
    assert out == '(A1*Y{1,2} + A2*Y{1} + A1)/(Y{1}*Y{1,2})\n'


def test_expand_set_and_x_conflict(tmp_path, capsys):
    with pytest.raises(SystemExit) as ei:
        main(['expand', '--tree', doc(tmp_path, TWO_PATH),
              '--set', '1', '--x', '2'])
    assert ei.value.code == 2
    assert capsys.readouterr().err.startswith('error:')


def test_tpaths_listing_and_dot(tmp_path, capsys):
    target = tmp_path / 'paths.dot'
    code, out, _ = run(capsys, [
        'tpaths', '--tree', doc(tmp_path, TWO_PATH), '--set', '1',
        '--dot', str(target)])
    assert code == 0
    assert out.splitlines() == [
        'path 1: (1)/(Y{2})',
        'path 2: (Y{1,2})/(Y{2})',
        'sum: (Y{1,2} + 1)/(Y{2})',
    ]
    blob = target.read_text()
    assert blob.count('graph hypertpath {') == 2


def test_tpaths_byte_deterministic(tmp_path, capsys):
    argv = ['tpaths', '--tree', doc(tmp_path, BUSH8), '--set', '2,4,5']
    _, first, _ = run(capsys, argv)
    _, second, _ = run(capsys, argv)
    assert first == second


def test_verify_small_clean_run(tmp_path, capsys):
    code, out, err = run(capsys, [
        'verify', '--suite', 'positivity', '--exhaustive-n', '2'])
    assert code == 0
    lines = out.splitlines()
    assert all(line.startswith('PASS positivity ') for line in lines[:-1])
    summary = json.loads(lines[-1])
    assert summary['suites'][0]['suite'] == 'positivity'
    assert summary['suites'][0]['passed'] is True
    assert err == ''


def test_verify_random_flag(tmp_path, capsys):
    code, out, _ = run(capsys, [
        'verify', '--suite', 'positivity', '--exhaustive-n', '2',
        '--random', '2', '5', '9'])
    assert code == 0
    base = json.loads(run(capsys, [
        'verify', '--suite', 'positivity',
        '--exhaustive-n', '2'])[1].splitlines()[-1])
    summary = json.loads(out.splitlines()[-1])
    extra = (summary['suites'][0]['instances']
             - base['suites'][0]['instances'])
    assert extra > 0


def test_verify_conjecture_finding_exits_three(capsys):
    code, out, _ = run(capsys, [
        'verify', '--suite', 'star-conjecture', '--exhaustive-n', '2'])
    assert code == 3
    assert 'FAIL star-conjecture' in out


def test_verify_failure_exits_one(tmp_path, capsys, monkeypatch):
    real = verifymod.runSuite

    def rigged(name, corpus, limits=None):
        report = real(name, corpus, limits)
        report.failures.append(('deadbeef0000', 1, (1,), 'rigged', '0', '1'))
        report.records.append((False, 'deadbeef0000', 1, (1,)))
        return report

    monkeypatch.setattr('glp.cli.verifymod.runSuite', rigged)
    code, out, _ = run(capsys, [
        'verify', '--suite', 'positivity', '--exhaustive-n', '2'])
    assert code == 1


def test_star_conjecture_reports_counterexamples(capsys):
    code, out, _ = run(capsys, ['star-conjecture', '--n', '4'])
    assert code == 3
    lines = out.splitlines()
    assert lines[0] == 'cluster nested: yes'
    assert 'S={1} case=center-without-2 DIFFER det@unit=4 formula@unit=7' \
        in lines
    assert ('S={1,2,3,4} case=center-with-2 DIFFER det@unit=20 '
            'formula@unit=12') in lines
    assert lines[-1] == 'conjecture fails for n=4: 8 of 11 sets differ'


def test_star_conjecture_rejects_tiny_n(capsys):
    code, _, err = run(capsys, ['star-conjecture', '--n', '2'])
    assert code == 2
    assert err.startswith('error:')


def test_export_dot(tmp_path, capsys):
    target = tmp_path / 'hyper.dot'
    code, out, _ = run(capsys, [
        'export-dot', '--tree', doc(tmp_path, TWO_PATH),
        '--out', str(target)])
    assert code == 0
    lines = target.read_text().splitlines()
    assert lines[0] == 'graph clusterhypergraph {'
    assert '  v1 [shape=doublecircle,label="1"];' in lines
    assert '  v4 [shape=circle,label="2\'"];' in lines
    assert '  h2 -- v1 [style=dashed];' in lines
    assert lines[-1] == '}'


def test_missing_file_is_input_error(capsys):
    code, _, err = run(capsys, ['ydet', '--tree', '/nope/missing.json',
                                '--set', '1'])
    assert code == 2
    assert err.startswith('error:')


def test_bad_set_is_input_error(tmp_path, capsys):
    code, _, err = run(capsys, [
        'ydet', '--tree', doc(tmp_path, FORK5), '--set', '3,zebra'])
    assert code == 2
    assert err.startswith('error:')


def test_rootless_doc_rejected_for_tree_verbs(tmp_path, capsys):
    code, _, err = run(capsys, [
        'cluster', '--tree', doc(tmp_path, FORK5)])
    assert code == 2
    assert err.startswith('error:')


def test_unknown_verb(capsys):
    with pytest.raises(SystemExit) as ei:
        main(['frobnicate'])
    assert ei.value.code == 2
    assert capsys.readouterr().err.startswith('error:')
