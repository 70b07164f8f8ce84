package lib;

import javax.swing.JPanel;

public abstract class AbstractPanel extends JPanel {
    protected abstract void refresh();
}
