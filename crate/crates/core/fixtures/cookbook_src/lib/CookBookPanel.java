package lib;

public class CookBookPanel extends AbstractPanel {
    private CookBook book;

    @Override
    protected void refresh() {
        book.toString();
    }
}
